#include "csa/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace csa {

namespace {

void axpy(State& out, const State& a, double h, const State& k) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + h * k[i];
}

double max_norm(const State& s) {
  double m = 0;
  for (double v : s) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

RkResult rk4(const Rhs& f, double x0, const State& s0, double x_end, double h, double blowup_limit) {
  if (!(h > 0)) throw std::invalid_argument("step must be positive");
  RkResult r;
  r.xs.push_back(x0);
  r.states.push_back(s0);
  const double dir = x_end >= x0 ? 1.0 : -1.0;
  const double span = std::fabs(x_end - x0);
  const auto n = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
  State s = s0, tmp(s0.size());
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    double xn = i + 1 == n ? x_end : x0 + dir * h * static_cast<double>(i + 1);
    double step = xn - x;
    State k1 = f(x, s);
    axpy(tmp, s, step / 2, k1);
    State k2 = f(x + step / 2, tmp);
    axpy(tmp, s, step / 2, k2);
    State k3 = f(x + step / 2, tmp);
    axpy(tmp, s, step, k3);
    State k4 = f(xn, tmp);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += step / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    x = xn;
    double m = max_norm(s);
    if (!std::isfinite(m) || m > blowup_limit) {
      throw Blowup("state norm exceeded " + std::to_string(blowup_limit) + " at x=" + std::to_string(x));
    }
    r.xs.push_back(x);
    r.states.push_back(s);
  }
  return r;
}

Tabulated::Tabulated(std::vector<double> xs, std::vector<double> ys, std::vector<double> dys)
    : xs_(std::move(xs)), ys_(std::move(ys)), dys_(std::move(dys)) {
  if (xs_.size() < 2 || xs_.size() != ys_.size()) throw std::invalid_argument("tabulated function needs >= 2 points");
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw std::invalid_argument("tabulated grid must be strictly increasing");
  }
  if (dys_.empty()) {
    // natural spline: solve for second derivatives, then read off slopes
    const std::size_t n = xs_.size();
    std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double h0 = xs_[i] - xs_[i - 1], h1 = xs_[i + 1] - xs_[i];
      double a = h0 / 6, b = (h0 + h1) / 3, cc = h1 / 6;
      double rhs = (ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0;
      double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m[i] = d[i] - c[i] * m[i + 1];
      if (i == 1) break;
    }
    dys_.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double h = xs_[i + 1] - xs_[i];
      dys_[i] = (ys_[i + 1] - ys_[i]) / h - h * (2 * m[i] + m[i + 1]) / 6;
    }
    double h = xs_[n - 1] - xs_[n - 2];
    dys_[n - 1] = (ys_[n - 1] - ys_[n - 2]) / h + h * (m[n - 2] + 2 * m[n - 1]) / 6;
  } else if (dys_.size() != xs_.size()) {
    throw std::invalid_argument("derivative table size mismatch");
  }
}

std::size_t Tabulated::segment(double x) const {
  if (!contains(x, 1e-9 * (1 + std::fabs(x)))) {
    throw std::out_of_range("x=" + std::to_string(x) + " outside tabulated range [" + std::to_string(lo()) + ", " +
                            std::to_string(hi()) + "]");
  }
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  return std::min(i, xs_.size() - 2);
}

double Tabulated::operator()(double x) const {
  std::size_t i = segment(x);
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ys_[i] + (t3 - 2 * t2 + t) * h * dys_[i] + (-2 * t3 + 3 * t2) * ys_[i + 1] +
         (t3 - t2) * h * dys_[i + 1];
}

double Tabulated::derivative(double x) const {
  std::size_t i = segment(x);
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * ys_[i] + (-6 * t2 + 6 * t) * ys_[i + 1]) / h + (3 * t2 - 4 * t + 1) * dys_[i] +
         (3 * t2 - 2 * t) * dys_[i + 1];
}

std::string Tabulated::serialize() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# source: " << source << "; step: " << step << "; error: " << error_estimate << "\n";
  for (std::size_t i = 0; i < xs_.size(); ++i) os << xs_[i] << " " << ys_[i] << " " << dys_[i] << "\n";
  return os.str();
}

Tabulated Tabulated::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<double> xs, ys, dys;
  std::string source;
  double step = 0, err = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto s = line.find("source: "), st = line.find("; step: "), er = line.find("; error: ");
      if (s != std::string::npos && st != std::string::npos && er != std::string::npos) {
        source = line.substr(s + 8, st - s - 8);
        step = std::stod(line.substr(st + 8, er - st - 8));
        err = std::stod(line.substr(er + 9));
      }
      continue;
    }
    std::istringstream ls(line);
    double x, y, d;
    if (!(ls >> x >> y)) throw std::invalid_argument("malformed table line: " + line);
    xs.push_back(x);
    ys.push_back(y);
    if (ls >> d) dys.push_back(d);
  }
  if (!dys.empty() && dys.size() != xs.size()) throw std::invalid_argument("derivative column incomplete");
  Tabulated t(xs, ys, dys);
  t.source = source;
  t.step = step;
  t.error_estimate = err;
  return t;
}

RankReport numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  RankReport r;
  if (m.size() == 0) return r;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  double smax = s.size() ? s(0) : 0.0;
  r.cutoff = rel_tol * smax;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > r.cutoff && s(i) > 0) ++r.rank;
  }
  return r;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * smax && s(i) > 0) ++rank;
  }
  const Eigen::MatrixXd& v = svd.matrixV();
  return v.rightCols(v.cols() - rank);
}

}  // namespace csa
