#pragma once

#include "qbc/operators.hpp"

namespace qbc {

// Analytic reference spectra, independent of the matrix builders.
struct SpectrumOracle {
    enum class Family { CircleLaplacian, CircleMomentum, Dirichlet, Neumann, Robin, Twisted };
    Family family = Family::Neumann;
    std::size_t levels = 1;
    double mu0 = 0.0;   // Robin
    double mupi = 0.0;  // Robin
    double alpha = 0.0; // Twisted

    static SpectrumOracle circle_laplacian(std::size_t levels);
    static SpectrumOracle circle_momentum(std::size_t levels);
    static SpectrumOracle dirichlet(std::size_t levels);
    static SpectrumOracle neumann(std::size_t levels);
    static SpectrumOracle robin(std::size_t levels, double mu0, double mupi);
    static SpectrumOracle twisted(std::size_t levels, double alpha);
};

// Ascending reference eigenvalues. Robin levels come from the secular function
// (mu0 mupi - k^2) sin(k pi) + k (mu0 + mupi) cos(k pi), bracketed per integer
// branch; vanishing total strength falls back to the Neumann list. The twisted
// closed form is re-validated against a small dense matrix on every call
// before being returned. Momentum levels are centered around zero.
std::vector<double> analytic_spectrum(const SpectrumOracle& o, const PhysicalConstants& c);

// Closed-form spin entropy of the two-branch Gaussian overlap:
// lambda_pm = (1 +- exp(-t^2/sigma^2))/2, returns -sum lambda ln lambda.
double gaussian_entropy(double t, double sigma);

struct BruteForceReport {
    std::vector<double> reference;  // characteristic-polynomial roots, ascending
    double max_deviation = 0.0;     // against hermitian_eigenvalues on the same input
};

// Independent re-diagonalization for tiny matrices (dim <= 12): characteristic
// polynomial by the trace recursion, roots by damped Newton from above the
// Cauchy bound with synthetic deflation.
BruteForceReport brute_force_check(const HermitianOperator& op);

}  // namespace qbc
