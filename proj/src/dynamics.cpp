#include "bisis/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace bisis {

namespace {
constexpr double kClampFloor = -1e-12;

// clamp RK4 undershoot; anything below kClampFloor means dt is too large
void sanitize(Vector& v, const char* what) {
    for (int i = 0; i < v.size(); ++i) {
        double val = v[i];
        if (!std::isfinite(val))
            throw DynamicsError(std::string("non-finite value in ") + what);
        if (val < 0.0) {
            if (val < kClampFloor)
                throw DynamicsError(std::string(what) +
                                    " went negative beyond roundoff (" +
                                    std::to_string(val) +
                                    "); reduce the integration step");
            v[i] = 0.0;
        }
    }
}

void check_simplex(const BiState& s) {
    for (int i = 0; i < s.size(); ++i) {
        double sum = s.x[i] + s.y[i];
        if (sum > 1.0 + 1e-12)
            throw DynamicsError("x_i + y_i exceeded 1 during integration (" +
                                std::to_string(sum) + "); reduce the integration step");
    }
}
}  // namespace

bool BiState::valid(double slack) const {
    if (y.size() != x.size()) return false;
    for (int i = 0; i < size(); ++i) {
        if (!(x[i] >= -slack && y[i] >= -slack)) return false;
        if (!(x[i] + y[i] <= 1.0 + slack)) return false;
    }
    return true;
}

double IntegratorConfig::default_step(const VirusParams& p1, const VirusParams& p2,
                                      const Graph& gA, const Graph& gB) {
    double rate = std::max({p1.beta * gA.spectral_radius(),
                            p2.beta * gB.spectral_radius(), p1.delta, p2.delta});
    return 0.01 / rate;
}

void bisis_rhs(const BiState& s, const VirusParams& p1, const VirusParams& p2,
               const Graph& gA, const Graph& gB, Vector& dx, Vector& dy) {
    const int n = gA.node_count();
    if (gB.node_count() != n || s.size() != n)
        throw DynamicsError("dimension mismatch between state and graphs");
    Vector free = Vector::Ones(n) - s.x - s.y;
    dx = p1.beta * free.cwiseProduct(gA.adjacency() * s.x) - p1.delta * s.x;
    dy = p2.beta * free.cwiseProduct(gB.adjacency() * s.y) - p2.delta * s.y;
}

Vector sis_rhs(const Vector& x, const VirusParams& p, const Graph& g) {
    if (x.size() != g.node_count())
        throw DynamicsError("dimension mismatch between state and graph");
    Vector free = Vector::Ones(x.size()) - x;
    return p.beta * free.cwiseProduct(g.adjacency() * x) - p.delta * x;
}

IntegrationResult integrate(const BiState& initial, const VirusParams& p1,
                            const VirusParams& p2, const Graph& gA, const Graph& gB,
                            const IntegratorConfig& cfg) {
    if (!initial.valid())
        throw DynamicsError("initial state violates 0 <= x, y and x+y <= 1");
    const double dt = cfg.step > 0.0 ? cfg.step
                                     : IntegratorConfig::default_step(p1, p2, gA, gB);

    BiState s = initial;
    Vector k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
    BiState tmp;
    double t = 0.0;
    double next_log = 0.0;

    TrajectoryLog log;
    auto maybe_log = [&](double now) {
        if (!cfg.keep_log) return;
        if (now + 1e-12 >= next_log) {
            log.times.push_back(now);
            log.states.push_back(s);
            next_log += cfg.log_interval;
        }
    };
    maybe_log(0.0);

    bool converged = false;
    while (t < cfg.max_time) {
        bisis_rhs(s, p1, p2, gA, gB, k1x, k1y);
        double field = std::max(k1x.cwiseAbs().maxCoeff(), k1y.cwiseAbs().maxCoeff());
        if (field < cfg.convergence_tol) {
            converged = true;
            break;
        }

        tmp.x = s.x + 0.5 * dt * k1x;
        tmp.y = s.y + 0.5 * dt * k1y;
        bisis_rhs(tmp, p1, p2, gA, gB, k2x, k2y);
        tmp.x = s.x + 0.5 * dt * k2x;
        tmp.y = s.y + 0.5 * dt * k2y;
        bisis_rhs(tmp, p1, p2, gA, gB, k3x, k3y);
        tmp.x = s.x + dt * k3x;
        tmp.y = s.y + dt * k3y;
        bisis_rhs(tmp, p1, p2, gA, gB, k4x, k4y);

        s.x += dt / 6.0 * (k1x + 2.0 * (k2x + k3x) + k4x);
        s.y += dt / 6.0 * (k1y + 2.0 * (k2y + k3y) + k4y);
        sanitize(s.x, "x");
        sanitize(s.y, "y");
        check_simplex(s);
        t += dt;
        maybe_log(t);
    }

    IntegrationResult res{std::move(s), converged, t, std::nullopt};
    if (cfg.keep_log) res.log = std::move(log);
    return res;
}

IntegrationResult integrate_single(const Vector& x0, const VirusParams& p,
                                   const Graph& g, const IntegratorConfig& cfg) {
    BiState init{x0, Vector::Zero(x0.size())};
    return integrate(init, p, p, g, g, cfg);
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
    if (log.states.empty()) return;
    const int n = log.states.front().size();
    out << "t";
    for (int i = 0; i < n; ++i) out << ",x_" << i;
    for (int i = 0; i < n; ++i) out << ",y_" << i;
    out << "\n";
    char buf[32];
    for (size_t k = 0; k < log.times.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g", log.times[k]);
        out << buf;
        const auto& s = log.states[k];
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%.12g", s.x[i]);
            out << ',' << buf;
        }
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%.12g", s.y[i]);
            out << ',' << buf;
        }
        out << "\n";
    }
}

}  // namespace bisis
