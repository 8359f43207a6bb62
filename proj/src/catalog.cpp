#include "mml/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace mml {

namespace {

Mat scalar_mat(double v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

Vec scalar_vec(double v) {
  Vec x(1);
  x(0) = v;
  return x;
}

double phi(double z) {
  return z * z / 4.0 - std::pow(z, 4) / 2.0 + std::pow(z, 6) / 6.0;
}
double phi_d(double z) { return z / 2.0 - 2.0 * z * z * z + std::pow(z, 5); }
double phi_dd(double z) { return 0.5 - 6.0 * z * z + 5.0 * std::pow(z, 4); }

ZeroSumGame make_f1() {
  ZeroSumGame g;
  g.d1 = 1;
  g.d2 = 1;
  g.analytic = true;
  g.name = "f1";
  g.value = [](const JointPoint& p) {
    const double x = p.x(0), y = p.y(0);
    return x * (y - 0.45) + phi(x) - phi(y);
  };
  g.grad_x = [](const JointPoint& p) {
    return scalar_vec(p.y(0) - 0.45 + phi_d(p.x(0)));
  };
  g.grad_y = [](const JointPoint& p) { return scalar_vec(p.x(0) - phi_d(p.y(0))); };
  g.hess_xx = [](const JointPoint& p) { return scalar_mat(phi_dd(p.x(0))); };
  g.hess_xy = [](const JointPoint&) { return scalar_mat(1.0); };
  g.hess_yx = [](const JointPoint&) { return scalar_mat(1.0); };
  g.hess_yy = [](const JointPoint& p) { return scalar_mat(-phi_dd(p.y(0))); };
  return g;
}

ZeroSumGame make_f2() {
  ZeroSumGame g;
  g.d1 = 1;
  g.d2 = 1;
  g.analytic = true;
  g.name = "f2";
  g.value = [](const JointPoint& p) {
    const double x = p.x(0), y = p.y(0);
    return x * y - 0.1 * (y * y / 2.0 - std::pow(y, 4) / 4.0);
  };
  g.grad_x = [](const JointPoint& p) { return scalar_vec(p.y(0)); };
  g.grad_y = [](const JointPoint& p) {
    const double y = p.y(0);
    return scalar_vec(p.x(0) - 0.1 * (y - y * y * y));
  };
  g.hess_xx = [](const JointPoint&) { return scalar_mat(0.0); };
  g.hess_xy = [](const JointPoint&) { return scalar_mat(1.0); };
  g.hess_yx = [](const JointPoint&) { return scalar_mat(1.0); };
  g.hess_yy = [](const JointPoint& p) {
    const double y = p.y(0);
    return scalar_mat(-0.1 * (1.0 - 3.0 * y * y));
  };
  return g;
}

ZeroSumGame make_f3() {
  ZeroSumGame g;
  g.d1 = 1;
  g.d2 = 1;
  g.analytic = true;
  g.name = "f3";
  g.value = [](const JointPoint& p) {
    const double x = p.x(0), y = p.y(0);
    return x * x / 10.0 - y * y / 10.0 + std::sin(x) * std::cos(y);
  };
  g.grad_x = [](const JointPoint& p) {
    return scalar_vec(p.x(0) / 5.0 + std::cos(p.x(0)) * std::cos(p.y(0)));
  };
  g.grad_y = [](const JointPoint& p) {
    return scalar_vec(-p.y(0) / 5.0 - std::sin(p.x(0)) * std::sin(p.y(0)));
  };
  g.hess_xx = [](const JointPoint& p) {
    return scalar_mat(0.2 - std::sin(p.x(0)) * std::cos(p.y(0)));
  };
  g.hess_xy = [](const JointPoint& p) {
    return scalar_mat(-std::cos(p.x(0)) * std::sin(p.y(0)));
  };
  g.hess_yx = [](const JointPoint& p) {
    return scalar_mat(-std::cos(p.x(0)) * std::sin(p.y(0)));
  };
  g.hess_yy = [](const JointPoint& p) {
    return scalar_mat(-0.2 - std::sin(p.x(0)) * std::cos(p.y(0)));
  };
  return g;
}

ZeroSumGame make_quad(double a, double b, double c, const std::string& name) {
  QuadraticGame q;
  q.A = scalar_mat(a);
  q.B = scalar_mat(b);
  q.C = scalar_mat(c);
  return make_quadratic_game(q, name);
}

// x^2 + y^2 as a joint objective for the minimization stepper; registered in
// game form so the same plumbing carries it (grad_y is +2y, so descending
// both blocks minimizes the value).
ZeroSumGame make_sum_sq() {
  ZeroSumGame g;
  g.d1 = 1;
  g.d2 = 1;
  g.analytic = true;
  g.name = "sum_sq";
  g.value = [](const JointPoint& p) { return p.x(0) * p.x(0) + p.y(0) * p.y(0); };
  g.grad_x = [](const JointPoint& p) { return scalar_vec(2.0 * p.x(0)); };
  g.grad_y = [](const JointPoint& p) { return scalar_vec(2.0 * p.y(0)); };
  g.hess_xx = [](const JointPoint&) { return scalar_mat(2.0); };
  g.hess_xy = [](const JointPoint&) { return scalar_mat(0.0); };
  g.hess_yx = [](const JointPoint&) { return scalar_mat(0.0); };
  g.hess_yy = [](const JointPoint&) { return scalar_mat(2.0); };
  return g;
}

}  // namespace

ZeroSumGame catalog(const std::string& id) {
  if (id == "f1") return make_f1();
  if (id == "f2") return make_f2();
  if (id == "f3") return make_f3();
  if (id == "bilinear") return make_quad(0.0, 1.0, 0.0, "bilinear");
  if (id == "quad") return make_quad(0.4, 1.0, 0.4, "quad");
  if (id == "quad_paper") return make_quad(0.4, -1.0, -0.4, "quad_paper");
  if (id == "quad_cc") return make_quad(0.4, -1.0, 0.4, "quad_cc");
  if (id == "sum_sq") return make_sum_sq();

  std::string msg = "catalog: unknown game id '" + id + "'; valid ids:";
  for (const auto& known : catalog_ids()) msg += " " + known;
  throw std::out_of_range(msg);
}

std::vector<std::string> catalog_ids() {
  return {"f1", "f2", "f3", "bilinear", "quad", "quad_paper", "quad_cc", "sum_sq"};
}

}  // namespace mml
