// LSMR (Fong & Saunders, 2011) for min ||A x - b||_2, unpreconditioned.
#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "cnngp/error.hpp"
#include "cnngp/sparse.hpp"

namespace cnngp {

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Stable Givens rotation: returns (c, s, r) with [c s; -s c] [a; b] = [r; 0].
std::tuple<double, double, double> sym_ortho(double a, double b) {
  if (b == 0.0) return {sign(a), 0.0, std::abs(a)};
  if (a == 0.0) return {0.0, sign(b), std::abs(b)};
  if (std::abs(b) > std::abs(a)) {
    const double tau = a / b;
    const double s = sign(b) / std::sqrt(1.0 + tau * tau);
    return {s * tau, s, b / s};
  }
  const double tau = b / a;
  const double c = sign(a) / std::sqrt(1.0 + tau * tau);
  return {c, c * tau, a / c};
}

}  // namespace

void LsmrOptions::validate() const {
  if (!(atol > 0.0 && atol < 1.0) || !(btol > 0.0 && btol < 1.0)) {
    throw ParameterError("lsmr: atol and btol must lie in (0, 1)");
  }
  if (max_iterations < 0) throw ParameterError("lsmr: max_iterations must be positive");
  if (!(damping >= 0.0)) throw ParameterError("lsmr: damping must be non-negative");
  if (!(conlim > 0.0)) throw ParameterError("lsmr: conlim must be positive");
}

std::string to_string(LsmrStop stop) {
  switch (stop) {
    case LsmrStop::ZeroSolution: return "zero_solution";
    case LsmrStop::Compatible: return "compatible";
    case LsmrStop::LeastSquares: return "least_squares";
    case LsmrStop::ConditionLimit: return "condition_limit";
    case LsmrStop::CompatibleEps: return "compatible_eps";
    case LsmrStop::LeastSquaresEps: return "least_squares_eps";
    case LsmrStop::ConditionLimitEps: return "condition_limit_eps";
    case LsmrStop::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

LsmrResult lsmr(const LinearOperator& a, const Vector& b, const LsmrOptions& opts) {
  opts.validate();
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m) throw DimensionError("lsmr: right-hand side length does not match rows");
  const Index max_iter = opts.max_iterations > 0 ? opts.max_iterations : 10 * std::max<Index>(n, 1);
  const double damp = opts.damping;

  LsmrResult result;
  result.x = Vector::Zero(n);
  LsmrReport& rep = result.report;
  Vector& x = result.x;

  Vector u = b;
  double beta = u.norm();
  const double normb = beta;
  Vector v = Vector::Zero(n);
  double alpha = 0.0;
  if (beta > 0.0) {
    u /= beta;
    a.apply_transpose_add(u, v);
    alpha = v.norm();
  }
  if (alpha > 0.0) v /= alpha;

  double zetabar = alpha * beta;
  double alphabar = alpha;
  double rho = 1.0, rhobar = 1.0, cbar = 1.0, sbar = 0.0;
  Vector h = v;
  Vector hbar = Vector::Zero(n);

  double betadd = beta, betad = 0.0, rhodold = 1.0, tautildeold = 0.0;
  double thetatilde = 0.0, zeta = 0.0, d = 0.0;

  double norm_a2 = alpha * alpha;
  double maxrbar = 0.0, minrbar = 1e100;
  double norm_a = std::sqrt(norm_a2);
  double cond_a = 1.0;
  double normx = 0.0;
  const double ctol = opts.conlim > 0.0 ? 1.0 / opts.conlim : 0.0;
  double normr = beta;
  double normar = alpha * beta;

  rep.norm_r = normr;
  rep.norm_ar = normar;
  if (opts.record_history) rep.residual_history.push_back(normr);
  if (normar == 0.0) {
    rep.stop = LsmrStop::ZeroSolution;
    return result;
  }

  Vector av(m);
  Vector atu(n);
  Index itn = 0;
  bool stopped = false;
  while (itn < max_iter) {
    ++itn;
    // Golub-Kahan bidiagonalization step.
    u *= -alpha;
    a.apply_add(v, u);
    beta = u.norm();
    if (beta > 0.0) {
      u /= beta;
      v *= -beta;
      a.apply_transpose_add(u, v);
      alpha = v.norm();
      if (alpha > 0.0) v /= alpha;
    }

    const auto [chat, shat, alphahat] = sym_ortho(alphabar, damp);

    const double rhoold = rho;
    const auto [c, s, rho_new] = sym_ortho(alphahat, beta);
    rho = rho_new;
    const double thetanew = s * alpha;
    alphabar = c * alpha;

    const double rhobarold = rhobar;
    const double zetaold = zeta;
    const double thetabar = sbar * rho;
    const double rhotemp = cbar * rho;
    const auto [cbar_new, sbar_new, rhobar_new] = sym_ortho(cbar * rho, thetanew);
    cbar = cbar_new;
    sbar = sbar_new;
    rhobar = rhobar_new;
    zeta = cbar * zetabar;
    zetabar = -sbar * zetabar;

    hbar = h - (thetabar * rho / (rhoold * rhobarold)) * hbar;
    x += (zeta / (rho * rhobar)) * hbar;
    h = v - (thetanew / rho) * h;

    // ||r|| estimate.
    const double betaacute = chat * betadd;
    const double betacheck = -shat * betadd;
    const double betahat = c * betaacute;
    betadd = -s * betaacute;

    const double thetatildeold = thetatilde;
    const auto [ctildeold, stildeold, rhotildeold] = sym_ortho(rhodold, thetabar);
    thetatilde = stildeold * rhobar;
    rhodold = ctildeold * rhobar;
    betad = -stildeold * betad + ctildeold * betahat;

    tautildeold = (zetaold - thetatildeold * tautildeold) / rhotildeold;
    const double taud = (zeta - thetatilde * tautildeold) / rhodold;
    d += betacheck * betacheck;
    normr = std::sqrt(d + (betad - taud) * (betad - taud) + betadd * betadd);

    // ||A|| and cond(A) estimates.
    norm_a2 += beta * beta;
    norm_a = std::sqrt(norm_a2);
    norm_a2 += alpha * alpha;
    maxrbar = std::max(maxrbar, rhobarold);
    if (itn > 1) minrbar = std::min(minrbar, rhobarold);
    cond_a = std::max(maxrbar, rhotemp) / std::min(minrbar, rhotemp);

    normar = std::abs(zetabar);
    normx = x.norm();
    if (opts.record_history) rep.residual_history.push_back(normr);

    const double test1 = normr / normb;
    const double test2 = (norm_a * normr) != 0.0 ? normar / (norm_a * normr)
                                                 : std::numeric_limits<double>::infinity();
    const double test3 = 1.0 / cond_a;
    const double t1 = test1 / (1.0 + norm_a * normx / normb);
    const double rtol = opts.btol + opts.atol * norm_a * normx / normb;

    LsmrStop stop = LsmrStop::IterationLimit;
    bool hit = false;
    if (itn >= max_iter) { stop = LsmrStop::IterationLimit; hit = true; }
    if (1.0 + test3 <= 1.0) { stop = LsmrStop::ConditionLimitEps; hit = true; }
    if (1.0 + test2 <= 1.0) { stop = LsmrStop::LeastSquaresEps; hit = true; }
    if (1.0 + t1 <= 1.0) { stop = LsmrStop::CompatibleEps; hit = true; }
    if (test3 <= ctol) { stop = LsmrStop::ConditionLimit; hit = true; }
    if (test2 <= opts.atol) { stop = LsmrStop::LeastSquares; hit = true; }
    if (test1 <= rtol) { stop = LsmrStop::Compatible; hit = true; }
    if (hit) {
      rep.stop = stop;
      stopped = true;
      break;
    }
  }
  if (!stopped) rep.stop = LsmrStop::IterationLimit;

  rep.iterations = itn;
  rep.norm_a = norm_a;
  rep.cond_a = cond_a;
  rep.norm_x = normx;
  // Report exact residual norms rather than the recurrence estimates.
  Vector r = b;
  av.setZero();
  a.apply_add(x, av);
  r -= av;
  atu.setZero();
  a.apply_transpose_add(r, atu);
  if (damp > 0.0) atu -= damp * damp * x;
  rep.norm_r = r.norm();
  rep.norm_ar = atu.norm();
  return result;
}

LsmrResult lsmr(const SparseRowMatrix& a, const Vector& b, const LsmrOptions& opts) {
  return lsmr(SparseOperator(a), b, opts);
}

}  // namespace cnngp
