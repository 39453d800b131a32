#pragma once

#include "chemoswarm/common.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace chemo {

/// Strategy constants of (mu/mu_w, lambda)-CMA-ES with the default settings
/// of Hansen's tutorial (positive recombination weights only).
struct CmaParameters {
    int dim = 0;
    int lambda = 0;
    int mu = 0;
    Eigen::VectorXd weights;
    double mueff = 0.0;
    double cc = 0.0;
    double cs = 0.0;
    double c1 = 0.0;
    double cmu = 0.0;
    double damps = 0.0;
    double chi_n = 0.0;

    /// lambda <= 0 selects the default 4 + floor(3 ln n).
    static CmaParameters standard(int dim, int lambda = 0);
};

struct CmaState {
    Eigen::VectorXd mean;
    double sigma = 0.0;
    Eigen::MatrixXd cov;
    Eigen::VectorXd p_sigma;
    Eigen::VectorXd p_c;
    int generation = 0;
};

/// Ask/tell CMA-ES that maximizes fitness.
class CmaEs {
public:
    static constexpr double kEigenFloor = 1e-14;

    CmaEs(CmaParameters params, const Eigen::VectorXd& mean, double sigma);
    /// Resumes from a saved state. Throws NumericError if the state is invalid.
    CmaEs(CmaParameters params, CmaState state);

    /// lambda samples mean + sigma * B D z, z ~ N(0, I), drawn in order from rng.
    std::vector<Eigen::VectorXd> ask(Rng& rng) const;

    /// Rank-based update. Candidates are ranked by descending fitness with a
    /// stable sort, so equal fitnesses keep their sampling order.
    /// Throws RangeError on size mismatch or non-finite fitness.
    void tell(std::span<const Eigen::VectorXd> candidates, std::span<const double> fitness);

    const CmaState& state() const noexcept { return state_; }
    const CmaParameters& parameters() const noexcept { return params_; }
    /// Eigenvalues of the covariance after flooring.
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

private:
    void decompose();

    CmaParameters params_;
    CmaState state_;
    Eigen::MatrixXd basis_;        // B
    Eigen::VectorXd eigenvalues_;  // D^2
    Eigen::MatrixXd inv_sqrt_cov_; // C^-1/2
};

} // namespace chemo
