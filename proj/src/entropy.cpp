#include "mutsel/entropy.hpp"

#include "mutsel/error.hpp"
#include "mutsel/kernels.hpp"
#include "mutsel/spectral.hpp"
#include "mutsel/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mutsel {

namespace {

void require_positive_reference(const Field& ubar) {
    if (!(min_value(ubar) > 0.0)) throw Error(ErrorCode::NotPositiveReference, "reference state must be positive");
}

double power(double s, double q) {
    if (q == 1.0) return s;
    if (q == 2.0) return s * s;
    return std::pow(s, q);
}

double second_derivative(double s, double q) {
    if (q == 1.0) return 0.0;
    if (q == 2.0) return 2.0;
    return q * (q - 1.0) * std::pow(s, q - 2.0);
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

double entropy_H(double q, const Field& ubar, const Field& u) {
    require_same_grid(ubar, u);
    require_positive_reference(ubar);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += ubar[i] * ubar[i] * power(u[i] / ubar[i], q);
    return s * u.grid().dx();
}

double dissipation_D(double q, const Field& ubar, const Field& u, const DiffusionOperator& op) {
    require_same_grid(ubar, u);
    require_positive_reference(ubar);
    if (q == 1.0) return 0.0;
    auto faces = op.face_coefficients();
    const std::size_t n = u.size();
    std::vector<double> ratio(n);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        ratio[i] = u[i] / ubar[i];
        weight[i] = ubar[i] * ubar[i] * second_derivative(ratio[i], q);
    }
    double s = 0.0;
    for (std::size_t f = 1; f < n; ++f) {
        const double dr = ratio[f] - ratio[f - 1];
        s += faces[f] * 0.5 * (weight[f - 1] + weight[f]) * dr * dr;
    }
    return s / u.grid().dx();
}

double lyapunov_F(double q, const Field& ubar, const Field& u) {
    const double h1 = entropy_H(1.0, ubar, u);
    if (!(h1 > 0.0)) throw Error(ErrorCode::DegenerateState, "H_1 must be positive");
    return std::log(entropy_H(q, ubar, u)) - q * std::log(h1);
}

GammaRange gamma_range(const Field& ubar, const Field& u, const Kernel& kernel, double p) {
    const Field gamma = psi(kernel, ubar, p) - psi(kernel, u, p);
    return {min_value(gamma), max_value(gamma)};
}

Decomposition decompose(const Field& u, const Field& ubar) {
    require_same_grid(u, ubar);
    const double nn = inner(ubar, ubar);
    if (!(nn > 0.0)) throw Error(ErrorCode::ZeroReference, "reference state has zero norm");
    const double lambda = inner(u, ubar) / nn;
    Field h = u;
    for (std::size_t i = 0; i < h.size(); ++i) h[i] -= lambda * ubar[i];
    return {lambda, std::move(h)};
}

LambdaRhs lambda_ode_rhs(double lambda, const Field& h, const Field& ubar, const Kernel& kernel, int p) {
    if (p != 1 && p != 2) throw Error(ErrorCode::UnsupportedExponent, "lambda ODE supports p in {1, 2}");
    require_same_grid(h, ubar);
    const Grid1D& grid = ubar.grid();
    const std::size_t n = grid.size();
    const double nn = inner(ubar, ubar);
    if (!(nn > 0.0)) throw Error(ErrorCode::ZeroReference, "reference state has zero norm");

    Field u = h;
    for (std::size_t i = 0; i < n; ++i) u[i] += lambda * ubar[i];
    const Field psi_bar = psi(kernel, ubar, p);
    const Field psi_u = psi(kernel, u, p);

    LambdaRhs out;
    double tilde = 0.0;
    double r1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tilde += psi_bar[i] * ubar[i] * ubar[i];
        r1 += (psi_bar[i] - psi_u[i]) * ubar[i] * h[i];
    }
    tilde *= grid.dx();
    out.main = tilde * lambda * (1.0 - std::pow(lambda, p)) / nn;
    out.R1 = r1 * grid.dx() / nn;

    // inner(x) = sum_k C(p,k) lambda^{p-k} int K(x,y) ubar^{p-k} h^k dy
    const DenseMatrix K = kernel.dense();
    Field g(grid);
    for (int k = 1; k <= p; ++k) {
        const double c = binomial(p, k) * std::pow(lambda, p - k);
        for (std::size_t j = 0; j < n; ++j) g[j] += c * std::pow(ubar[j], p - k) * std::pow(h[j], k) * grid.dx();
    }
    Field inner_x(grid);
    kernels::dense_matvec(K, g.values(), inner_x.values());
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r2 += inner_x[i] * ubar[i] * ubar[i];
    out.R2 = -lambda * r2 * grid.dx() / nn;
    return out;
}

double blind_lambda_rate(double lambda1, double lambda, const Field& u, const Kernel& kernel, double p) {
    if (!kernel.is_blind()) throw Error(ErrorCode::InvalidKernel, "blind_lambda_rate needs a blind kernel");
    return (-lambda1 - psi(kernel, u, p)[0]) * lambda;
}

EntropySample entropy_sample(double t, const Field& u, const Field& ubar, const Problem& problem,
                             const std::vector<double>& qs) {
    EntropySample s;
    s.t = t;
    s.mass = quadrature(u);
    s.sup_u = sup_norm(u);
    s.q = qs;
    s.H1 = entropy_H(1.0, ubar, u);
    for (double q : qs) {
        const double hq = entropy_H(q, ubar, u);
        s.H.push_back(hq);
        s.D.push_back(dissipation_D(q, ubar, u, problem.op));
        s.F.push_back(s.H1 > 0.0 ? std::log(hq) - q * std::log(s.H1) : std::numeric_limits<double>::quiet_NaN());
    }
    const GammaRange g = gamma_range(ubar, u, problem.kernel, problem.p);
    s.gamma_min = g.min;
    s.gamma_max = g.max;
    const Decomposition d = decompose(u, ubar);
    s.lambda = d.lambda;
    s.h_norm2 = norm2(d.h);
    s.h_dirichlet = dirichlet_form(ubar, d.h, problem.op);
    return s;
}

double IdentityCheck::max_residual() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, r);
    return m;
}

double IdentityCheck::max_abs_dHdt() const {
    double m = 0.0;
    for (double d : dHdt) m = std::max(m, std::abs(d));
    return m;
}

IdentityCheck identity_residual(const Trajectory& traj, double q, const Field& ubar, const Problem& problem,
                                double stationary_tol) {
    require_positive_reference(ubar);
    const double stat = stationary_residual(ubar, problem);
    if (stat > stationary_tol)
        throw Error(ErrorCode::NotStationaryReference,
                    "reference residual " + std::to_string(stat) + " exceeds " + std::to_string(stationary_tol));
    IdentityCheck out;
    if (traj.size() < 3) return out;
    std::vector<double> H(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) H[k] = entropy_H(q, ubar, traj[k].u);
    const Field psi_bar = psi(problem.kernel, ubar, problem.p);
    const double dx = problem.grid.dx();
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        const Field& u = traj[k].u;
        const double dHdt = (H[k + 1] - H[k - 1]) / (traj[k + 1].t - traj[k - 1].t);
        const Field psi_u = psi(problem.kernel, u, problem.p);
        double source = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double s = u[i] / ubar[i];
            const double h_prime = q == 1.0 ? 1.0 : q * power(s, q - 1.0);
            source += ubar[i] * h_prime * (psi_bar[i] - psi_u[i]) * u[i];
        }
        source *= dx;
        out.t.push_back(traj[k].t);
        out.dHdt.push_back(dHdt);
        out.residual.push_back(std::abs(dHdt + dissipation_D(q, ubar, u, problem.op) - source));
    }
    return out;
}

}  // namespace mutsel
