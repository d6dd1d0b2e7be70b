#ifndef BISIS_BOUNDS_HPP
#define BISIS_BOUNDS_HPP

#include "bisis/equilibria.hpp"

namespace bisis {

constexpr double kStrictnessTol = 1e-9;  // slack allowed on strict inequalities

struct Prop1Result {
    double avg;    // 1^T x* / N
    double bound;  // 1 - 1/(tau lambda)
    double xmax;
    bool holds_lower;  // avg <= bound
    bool holds_upper;  // bound <= xmax
};

struct Cor1Result {
    Vector margin_x;  // x*_i (1 - yhat_i) - xhat_i
    Vector margin_y;  // y*_i (1 - xhat_i) - yhat_i
    double min_margin;
    bool holds;
};

struct Prop2Result {
    double lhs;  // (1^T xhat + 1^T yhat) / N
    double rhs;  // 1 - 1/(tau1 lambda(A) + tau2 lambda(B) - 1)
    double margin;
    bool holds;
};

struct MonotonicityResult {
    bool holds;
    int first_violation_index = -1;  // sweep interval index, -1 if none
    std::string detail;
};

// avg <= 1 - 1/(tau lambda) <= max_i x*_i, each with slack >= -1e-9
Prop1Result check_prop1(const SingleVirusEquilibrium& eq, const Graph& g,
                        const VirusParams& p);

// mu = (1/N) sum yhat_i/(1-xhat_i),  nu = (1/N) sum xhat_i/(1-yhat_i)
std::pair<double, double> mu_nu(const CoexistenceEquilibrium& ce);
std::pair<double, double> mu_nu(const Vector& xhat, const Vector& yhat);

Cor1Result check_cor1(const CoexistenceEquilibrium& ce,
                      const SingleVirusEquilibrium& ex,
                      const SingleVirusEquilibrium& ey);

Prop2Result check_prop2(const CoexistenceEquilibrium& ce, const Graph& gA,
                        const Graph& gB, const VirusParams& p1,
                        const VirusParams& p2);

// Per-node monotonicity of a warm-started CE sweep in tau1 (xhat up, yhat
// down). Set increasing_x=false for the mirrored tau2 sweep.
MonotonicityResult verify_lemma1_monotonicity(
    const std::vector<std::pair<double, CoexistenceEquilibrium>>& sweep,
    bool increasing_x = true);

// Per-node monotonicity of f_i = yhat_i/(1-xhat_i) (down) and
// g_i = xhat_i/(1-yhat_i) (up) along a tau1 sweep, plus the aggregates
// mu (down) and nu (up). f_increasing=true flips all directions (tau2 sweep).
MonotonicityResult verify_thm1_monotonicity(
    const std::vector<std::pair<double, CoexistenceEquilibrium>>& sweep,
    bool f_decreasing = true);

struct BoundsReport {
    Prop1Result prop1_v1;
    Prop1Result prop1_v2;
    Cor1Result cor1;
    Prop2Result prop2;
    double mu;
    double nu;
    bool all_satisfied;
};

// Full evaluation on one certified CE of a COEXIST instance.
BoundsReport evaluate_bounds(const CoexistenceEquilibrium& ce,
                             const RegimeReport& regime, const Graph& gA,
                             const Graph& gB, const VirusParams& p1,
                             const VirusParams& p2);

}  // namespace bisis

#endif
