#include "mixdim/structural.hpp"

#include <cmath>

#include "mixdim/errors.hpp"

namespace mixdim::structural {

using mesh::Mesh;
using mesh::ModelKind;
using mesh::ShapeValues;

std::string to_string(Theory t) {
  switch (t) {
    case Theory::EulerBernoulli: return "euler_bernoulli";
    case Theory::Timoshenko: return "timoshenko";
    case Theory::Kirchhoff: return "kirchhoff";
    case Theory::Mindlin: return "mindlin";
  }
  return "?";
}

Theory theory_from_string(const std::string& s) {
  if (s == "euler_bernoulli") return Theory::EulerBernoulli;
  if (s == "timoshenko") return Theory::Timoshenko;
  if (s == "kirchhoff") return Theory::Kirchhoff;
  if (s == "mindlin") return Theory::Mindlin;
  throw Error(ErrorKind::Config, "unknown structural theory '" + s + "'");
}

bool is_beam(Theory t) { return t == Theory::EulerBernoulli || t == Theory::Timoshenko; }

int dofs_per_node(Theory t) {
  switch (t) {
    case Theory::EulerBernoulli: return 1;
    case Theory::Timoshenko: return 3;
    case Theory::Kirchhoff: return 1;
    case Theory::Mindlin: return 3;
  }
  return 0;
}

void check_compatible(const Mesh& mesh, Theory t) {
  const ModelKind want = is_beam(t) ? ModelKind::Beam : ModelKind::Plate;
  if (mesh.model() != want) {
    throw Error(ErrorKind::Model, to_string(t) + " theory needs a " + mesh::to_string(want) + " mesh");
  }
  if (t == Theory::EulerBernoulli || t == Theory::Kirchhoff) {
    if (mesh.basis() != mesh::BasisKind::Spline || mesh.min_degree() < 2) {
      throw Error(ErrorKind::Model, to_string(t) + " bending needs a C1 spline basis of degree >= 2");
    }
    // repeated interior knots would break C1 continuity
    for (const auto& kv : mesh.knots()) {
      for (size_t i = 1; i + 1 < kv.spans().size() + 1; ++i) {
        const int s = kv.spans()[i];
        int mult = 0;
        for (int j = 0; j < static_cast<int>(kv.knots().size()); ++j) mult += kv.knot(j) == kv.knot(s);
        if (mult > kv.degree() - 1) throw Error(ErrorKind::Model, "rotation-free bending needs C1 continuity");
      }
    }
  }
}

Eigen::Matrix3d plate_bending_matrix(const Material& m) {
  const double D = m.E * std::pow(m.thickness, 3) / (12.0 * (1.0 - m.nu * m.nu));
  Eigen::Matrix3d Db;
  Db << 1, m.nu, 0, m.nu, 1, 0, 0, 0, (1.0 - m.nu) / 2.0;
  return D * Db;
}

Eigen::Matrix2d plate_shear_matrix(const Material& m) {
  return m.k_shear * m.G() * m.thickness * Eigen::Matrix2d::Identity();
}

Eigen::MatrixXd stiffness_beam_eb(const Mesh& mesh, int e, const Material& m, const QuadratureSpec& q) {
  check_compatible(mesh, Theory::EulerBernoulli);
  const double EI = m.E * m.width * std::pow(m.thickness, 3) / 12.0;
  const int n = mesh.nodes_per_element();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  elasticity::integrate(mesh, e, q, 2, [&](const ShapeValues& sv, double w) {
    const Eigen::VectorXd B = sv.d2N.col(0);
    K.noalias() += (w * EI) * B * B.transpose();
  });
  return K;
}

FrameTransforms frame_transforms(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  FrameTransforms t;
  t.Rv << c, s, -s, c;
  t.Tinv << c * c, s * s, -2.0 * s * c, s * s, c * c, 2.0 * s * c, s * c, -s * c, c * c - s * s;
  t.R << c, s, 0, -s, c, 0, 0, 0, 1;
  return t;
}

Eigen::MatrixXd stiffness_beam_timoshenko(const Mesh& mesh, int e, const Material& m, const QuadratureSpec& q) {
  check_compatible(mesh, Theory::Timoshenko);
  const double A = m.width * m.thickness;
  const double I = m.width * std::pow(m.thickness, 3) / 12.0;
  const double EA = m.E * A, EI = m.E * I, kGA = m.k_shear * m.G() * A;
  const int nen = mesh.nodes_per_element();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * nen, 3 * nen);
  auto axial_bending = [&](const ShapeValues& sv, double w) {
    for (int a = 0; a < nen; ++a)
      for (int b = 0; b < nen; ++b) {
        const double dd = w * sv.dN(a, 0) * sv.dN(b, 0);
        K(3 * a, 3 * b) += EA * dd;
        K(3 * a + 2, 3 * b + 2) += EI * dd;
      }
  };
  auto shear = [&](const ShapeValues& sv, double w) {
    Eigen::RowVectorXd Bs = Eigen::RowVectorXd::Zero(3 * nen);
    for (int a = 0; a < nen; ++a) {
      Bs[3 * a + 1] = sv.dN(a, 0);
      Bs[3 * a + 2] = -sv.N[a];
    }
    K.noalias() += (w * kGA) * Bs.transpose() * Bs;
  };
  elasticity::integrate(mesh, e, q, 1, axial_bending);
  QuadratureSpec qs = q;
  // selective reduced integration of the shear term for linear elements
  if (qs.points == 0 && mesh.degree(0) == 1) qs.points = 1;
  elasticity::integrate(mesh, e, qs, 1, shear);

  const Eigen::Matrix3d R = frame_transforms(mesh.placement.angle).R;
  Eigen::MatrixXd Rb = Eigen::MatrixXd::Zero(3 * nen, 3 * nen);
  for (int a = 0; a < nen; ++a) Rb.block<3, 3>(3 * a, 3 * a) = R;
  Eigen::MatrixXd Kg = Rb.transpose() * K * Rb;
  return 0.5 * (Kg + Kg.transpose());
}

Eigen::MatrixXd stiffness_plate(const Mesh& mesh, int e, Theory t, const Material& m, const QuadratureSpec& q) {
  check_compatible(mesh, t);
  const int nen = mesh.nodes_per_element();
  const Eigen::Matrix3d Db = plate_bending_matrix(m);
  if (t == Theory::Kirchhoff) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nen, nen);
    elasticity::integrate(mesh, e, q, 2, [&](const ShapeValues& sv, double w) {
      Eigen::MatrixXd B(3, nen);
      B.row(0) = sv.d2N.col(0).transpose();
      B.row(1) = sv.d2N.col(1).transpose();
      B.row(2) = 2.0 * sv.d2N.col(2).transpose();
      K.noalias() += w * (B.transpose() * Db * B);
    });
    return 0.5 * (K + K.transpose());
  }
  if (t != Theory::Mindlin) throw Error(ErrorKind::Model, "plate stiffness needs a plate theory");
  const Eigen::Matrix2d Ds = plate_shear_matrix(m);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * nen, 3 * nen);
  elasticity::integrate(mesh, e, q, 1, [&](const ShapeValues& sv, double w) {
    Eigen::MatrixXd Bb = Eigen::MatrixXd::Zero(3, 3 * nen), Bs = Eigen::MatrixXd::Zero(2, 3 * nen);
    for (int a = 0; a < nen; ++a) {
      const double n1 = sv.dN(a, 0), n2 = sv.dN(a, 1);
      Bb(0, 3 * a + 1) = n1;
      Bb(1, 3 * a + 2) = n2;
      Bb(2, 3 * a + 1) = n2;
      Bb(2, 3 * a + 2) = n1;
      Bs(0, 3 * a) = n1;
      Bs(0, 3 * a + 1) = -sv.N[a];
      Bs(1, 3 * a) = n2;
      Bs(1, 3 * a + 2) = -sv.N[a];
    }
    K.noalias() += w * (Bb.transpose() * Db * Bb + Bs.transpose() * Ds * Bs);
  });
  return 0.5 * (K + K.transpose());
}

Eigen::MatrixXd stiffness(const Mesh& mesh, int e, Theory t, const Material& m, const QuadratureSpec& q) {
  switch (t) {
    case Theory::EulerBernoulli: return stiffness_beam_eb(mesh, e, m, q);
    case Theory::Timoshenko: return stiffness_beam_timoshenko(mesh, e, m, q);
    default: return stiffness_plate(mesh, e, t, m, q);
  }
}

Eigen::VectorXd distributed_load(const Mesh& mesh, int e, Theory t, double q, const QuadratureSpec& qs) {
  check_compatible(mesh, t);
  const int ndof = dofs_per_node(t);
  const int nen = mesh.nodes_per_element();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof * nen);
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(ndof);
  if (t == Theory::Timoshenko) {
    // local transverse direction expressed in global axes
    const double c = std::cos(mesh.placement.angle), s = std::sin(mesh.placement.angle);
    dir << -s, c, 0.0;
  } else {
    dir[0] = 1.0;
  }
  const double width = 1.0;
  elasticity::integrate(mesh, e, qs, 0, [&](const ShapeValues& sv, double w) {
    for (int a = 0; a < nen; ++a) f.segment(ndof * a, ndof) += (w * width * q * sv.N[a]) * dir;
  });
  return f;
}

Prolongation prolong_beam(Theory t, const Material& m, const ShapeValues& sv, double ybar) {
  if (std::abs(ybar) > 0.5 * m.thickness * (1.0 + 1e-10)) {
    throw Error(ErrorKind::InterfaceGeometry, "cross-section point lies outside the beam height");
  }
  const int nen = static_cast<int>(sv.N.size());
  Prolongation p;
  p.C = Eigen::MatrixXd::Zero(3, 3);
  p.C(0, 0) = m.E;
  if (t == Theory::EulerBernoulli) {
    if (sv.d2N.cols() < 1) throw Error(ErrorKind::Internal, "second derivatives required");
    p.N = Eigen::MatrixXd::Zero(2, nen);
    p.B = Eigen::MatrixXd::Zero(3, nen);
    for (int a = 0; a < nen; ++a) {
      p.N(0, a) = -ybar * sv.dN(a, 0);
      p.N(1, a) = sv.N[a];
      p.B(0, a) = -ybar * sv.d2N(a, 0);
    }
    return p;
  }
  if (t != Theory::Timoshenko) throw Error(ErrorKind::Model, "beam prolongation needs a beam theory");
  p.C(2, 2) = m.k_shear * m.G();
  p.N = Eigen::MatrixXd::Zero(2, 3 * nen);
  p.B = Eigen::MatrixXd::Zero(3, 3 * nen);
  for (int a = 0; a < nen; ++a) {
    const double N = sv.N[a], dN = sv.dN(a, 0);
    p.N(0, 3 * a) = N;
    p.N(0, 3 * a + 2) = -ybar * N;
    p.N(1, 3 * a + 1) = N;
    p.B(0, 3 * a) = dN;
    p.B(0, 3 * a + 2) = -ybar * dN;
    p.B(2, 3 * a + 1) = dN;
    p.B(2, 3 * a + 2) = -N;
  }
  return p;
}

Prolongation prolong_plate(Theory t, const Material& m, const ShapeValues& sv, double x3) {
  if (std::abs(x3) > 0.5 * m.thickness * (1.0 + 1e-10)) {
    throw Error(ErrorKind::InterfaceGeometry, "thickness coordinate lies outside the plate");
  }
  const int nen = static_cast<int>(sv.N.size());
  const double f = m.E / (1.0 - m.nu * m.nu);
  Eigen::Matrix3d Cb;
  Cb << f, f * m.nu, 0, f * m.nu, f, 0, 0, 0, f * (1.0 - m.nu) / 2.0;
  Prolongation p;
  if (t == Theory::Kirchhoff) {
    if (sv.d2N.cols() < 3) throw Error(ErrorKind::Internal, "second derivatives required");
    p.N = Eigen::MatrixXd::Zero(3, nen);
    p.B = Eigen::MatrixXd::Zero(3, nen);
    for (int a = 0; a < nen; ++a) {
      p.N(0, a) = -x3 * sv.dN(a, 0);
      p.N(1, a) = -x3 * sv.dN(a, 1);
      p.N(2, a) = sv.N[a];
      p.B(0, a) = -x3 * sv.d2N(a, 0);
      p.B(1, a) = -x3 * sv.d2N(a, 1);
      p.B(2, a) = -2.0 * x3 * sv.d2N(a, 2);
    }
    p.C = Cb;
    return p;
  }
  if (t != Theory::Mindlin) throw Error(ErrorKind::Model, "plate prolongation needs a plate theory");
  p.N = Eigen::MatrixXd::Zero(3, 3 * nen);
  p.B = Eigen::MatrixXd::Zero(5, 3 * nen);
  for (int a = 0; a < nen; ++a) {
    const double N = sv.N[a], n1 = sv.dN(a, 0), n2 = sv.dN(a, 1);
    const int c = 3 * a;
    p.N(0, c + 1) = -x3 * N;
    p.N(1, c + 2) = -x3 * N;
    p.N(2, c) = N;
    p.B(0, c + 1) = -x3 * n1;
    p.B(1, c + 2) = -x3 * n2;
    p.B(2, c + 1) = -x3 * n2;
    p.B(2, c + 2) = -x3 * n1;
    p.B(3, c) = n2;  // 2 e_yz = w,2 - beta2
    p.B(3, c + 2) = -N;
    p.B(4, c) = n1;  // 2 e_xz = w,1 - beta1
    p.B(4, c + 1) = -N;
  }
  p.C = Eigen::MatrixXd::Zero(5, 5);
  p.C.topLeftCorner<3, 3>() = Cb;
  p.C(3, 3) = p.C(4, 4) = m.k_shear * m.G();
  return p;
}

}  // namespace mixdim::structural
