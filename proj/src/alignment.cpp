#include "thickknot/alignment.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace thickknot {

Point3 RigidTransform::apply(const Point3& p) const {
    const auto& r = rotation;
    return {r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + translation.x,
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + translation.y,
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + translation.z};
}

Alignment align_points(std::span<const Point3> moving, std::span<const Point3> target) {
    if (moving.size() != target.size() || moving.empty()) {
        throw std::invalid_argument("align_points: point sets must be non-empty and equally long");
    }
    const auto n = static_cast<Eigen::Index>(moving.size());
    Eigen::Matrix3Xd a(3, n);
    Eigen::Matrix3Xd b(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = moving[static_cast<std::size_t>(i)];
        const auto& q = target[static_cast<std::size_t>(i)];
        a.col(i) << p.x, p.y, p.z;
        b.col(i) << q.x, q.y, q.z;
    }
    const Eigen::Vector3d ca = a.rowwise().mean();
    const Eigen::Vector3d cb = b.rowwise().mean();
    a.colwise() -= ca;
    b.colwise() -= cb;

    const Eigen::Matrix3d h = a * b.transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
        d(2, 2) = -1.0;
    }
    const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
    const Eigen::Vector3d t = cb - r * ca;

    Alignment out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.transform.rotation[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r(i, j);
        }
    }
    out.transform.translation = {t(0), t(1), t(2)};
    double sum = 0.0;
    for (std::size_t i = 0; i < moving.size(); ++i) {
        const Vec3 diff = out.transform.apply(moving[i]) - target[i];
        sum += dot(diff, diff);
    }
    out.rms = std::sqrt(sum / static_cast<double>(moving.size()));
    return out;
}

double aligned_rms(const KnotPolygon& k, const KnotPolygon& target) {
    return align_points(k.vertices(), target.vertices()).rms;
}

KnotPolygon transform_polygon(const KnotPolygon& k, const RigidTransform& t) {
    std::vector<Point3> pts;
    pts.reserve(k.size());
    for (const auto& p : k.vertices()) {
        pts.push_back(t.apply(p));
    }
    return KnotPolygon::from_trusted(std::move(pts));
}

}  // namespace thickknot
