#include "chemoswarm/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chemo {

CmaParameters CmaParameters::standard(int dim, int lambda) {
    if (dim < 1) throw RangeError("CMA-ES dimension must be >= 1");
    CmaParameters p;
    const double n = dim;
    p.dim = dim;
    p.lambda = lambda > 0 ? lambda : 4 + static_cast<int>(std::floor(3.0 * std::log(n)));
    if (p.lambda < 2) throw RangeError("CMA-ES population must be >= 2");
    p.mu = p.lambda / 2;

    p.weights.resize(p.mu);
    for (int i = 0; i < p.mu; ++i) p.weights[i] = std::log((p.lambda + 1) / 2.0) - std::log(i + 1.0);
    p.weights /= p.weights.sum();
    p.mueff = 1.0 / p.weights.squaredNorm();

    p.cc = (4.0 + p.mueff / n) / (n + 4.0 + 2.0 * p.mueff / n);
    p.cs = (p.mueff + 2.0) / (n + p.mueff + 5.0);
    p.c1 = 2.0 / ((n + 1.3) * (n + 1.3) + p.mueff);
    p.cmu = std::min(1.0 - p.c1, 2.0 * (p.mueff - 2.0 + 1.0 / p.mueff) / ((n + 2.0) * (n + 2.0) + p.mueff));
    p.damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((p.mueff - 1.0) / (n + 1.0)) - 1.0) + p.cs;
    p.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    return p;
}

CmaEs::CmaEs(CmaParameters params, const Eigen::VectorXd& mean, double sigma) : params_(std::move(params)) {
    const int n = params_.dim;
    if (mean.size() != n) throw RangeError("initial mean has the wrong dimension");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw RangeError("initial sigma must be positive");
    state_.mean = mean;
    state_.sigma = sigma;
    state_.cov = Eigen::MatrixXd::Identity(n, n);
    state_.p_sigma = Eigen::VectorXd::Zero(n);
    state_.p_c = Eigen::VectorXd::Zero(n);
    state_.generation = 0;
    decompose();
}

CmaEs::CmaEs(CmaParameters params, CmaState state) : params_(std::move(params)), state_(std::move(state)) {
    const int n = params_.dim;
    if (state_.mean.size() != n || state_.cov.rows() != n || state_.cov.cols() != n ||
        state_.p_sigma.size() != n || state_.p_c.size() != n) {
        throw NumericError("CMA-ES state has inconsistent dimensions");
    }
    if (!(state_.sigma > 0.0) || !std::isfinite(state_.sigma)) throw NumericError("CMA-ES sigma must be positive");
    if (!state_.cov.allFinite() || !state_.mean.allFinite()) throw NumericError("CMA-ES state is not finite");
    const double scale = std::max(1.0, state_.cov.cwiseAbs().maxCoeff());
    if ((state_.cov - state_.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NumericError("CMA-ES covariance is not symmetric");
    }
    decompose();
}

void CmaEs::decompose() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state_.cov);
    if (solver.info() != Eigen::Success) throw NumericError("covariance eigendecomposition failed");
    basis_ = solver.eigenvectors();
    eigenvalues_ = solver.eigenvalues();
    const double top = eigenvalues_.maxCoeff();
    if (!(top > 0.0) || !std::isfinite(top)) throw NumericError("covariance is not positive definite");
    const double floor = kEigenFloor * top;
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) eigenvalues_[i] = std::max(eigenvalues_[i], floor);
    inv_sqrt_cov_ = basis_ * eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal() * basis_.transpose();
}

std::vector<Eigen::VectorXd> CmaEs::ask(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::MatrixXd bd = basis_ * eigenvalues_.cwiseSqrt().asDiagonal();
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(params_.lambda));
    Eigen::VectorXd z(params_.dim);
    for (int k = 0; k < params_.lambda; ++k) {
        for (int i = 0; i < params_.dim; ++i) z[i] = normal(rng);
        out.emplace_back(state_.mean + state_.sigma * (bd * z));
    }
    return out;
}

void CmaEs::tell(std::span<const Eigen::VectorXd> candidates, std::span<const double> fitness) {
    const int n = params_.dim;
    const auto lambda = static_cast<std::size_t>(params_.lambda);
    if (candidates.size() != lambda || fitness.size() != lambda) {
        throw RangeError("tell expects exactly lambda candidates and fitnesses");
    }
    for (std::size_t i = 0; i < lambda; ++i) {
        if (!std::isfinite(fitness[i])) throw RangeError("rejected evaluation: non-finite fitness");
        if (candidates[i].size() != n) throw RangeError("candidate has the wrong dimension");
    }

    std::vector<std::size_t> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

    const Eigen::VectorXd old_mean = state_.mean;
    const double sigma = state_.sigma;
    Eigen::MatrixXd ys(n, params_.mu);
    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < params_.mu; ++i) {
        ys.col(i) = (candidates[order[static_cast<std::size_t>(i)]] - old_mean) / sigma;
        y_w += params_.weights[i] * ys.col(i);
    }

    state_.mean = old_mean + sigma * y_w;

    const double cs = params_.cs;
    const double cc = params_.cc;
    state_.p_sigma = (1.0 - cs) * state_.p_sigma + std::sqrt(cs * (2.0 - cs) * params_.mueff) * (inv_sqrt_cov_ * y_w);

    const int g = state_.generation + 1;
    const double ps_norm = state_.p_sigma.norm();
    const double ps_corrected = ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * g));
    const bool h_sigma = ps_corrected < (1.4 + 2.0 / (n + 1.0)) * params_.chi_n;

    state_.p_c = (1.0 - cc) * state_.p_c;
    if (h_sigma) state_.p_c += std::sqrt(cc * (2.0 - cc) * params_.mueff) * y_w;

    const double delta_h = h_sigma ? 0.0 : cc * (2.0 - cc);
    const double c1 = params_.c1;
    const double cmu = params_.cmu;
    Eigen::MatrixXd rank_mu = ys * params_.weights.asDiagonal() * ys.transpose();
    state_.cov = (1.0 + c1 * delta_h - c1 - cmu) * state_.cov + c1 * (state_.p_c * state_.p_c.transpose()) +
                 cmu * rank_mu;
    state_.cov = 0.5 * (state_.cov + state_.cov.transpose()).eval();

    state_.sigma = sigma * std::exp((cs / params_.damps) * (ps_norm / params_.chi_n - 1.0));
    if (!(state_.sigma > 0.0) || !std::isfinite(state_.sigma)) throw NumericError("step size degenerated");
    state_.generation = g;
    decompose();
}

} // namespace chemo
