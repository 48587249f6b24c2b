#pragma once

#include <Eigen/Core>

namespace osl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Axis-aligned search box [0, lx] x [0, ly] x [0, lz] gridded at `cell` metres.
struct SearchVolume {
  double lx = 100.0;
  double ly = 60.0;
  double lz = 30.0;
  double cell = 10.0;

  Vec3 extents() const { return {lx, ly, lz}; }
  double diagonal() const { return extents().norm(); }

  bool contains(const Vec3& p) const {
    return p.x() >= 0.0 && p.x() <= lx && p.y() >= 0.0 && p.y() <= ly &&
           p.z() >= 0.0 && p.z() <= lz;
  }

  Vec3 clamp(const Vec3& p) const {
    return p.cwiseMax(Vec3::Zero()).cwiseMin(extents());
  }
};

}  // namespace osl
