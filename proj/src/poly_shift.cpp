#include "ncmatsaev/poly_shift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

namespace ncm {

namespace {

using Index = Eigen::Index;
constexpr double two_pi = 2.0 * std::numbers::pi;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_real(std::string_view s, std::string_view whole) {
    s = trim(s);
    if (s.empty() || s == "+") {
        return 1.0;
    }
    if (s == "-") {
        return -1.0;
    }
    const std::string buf(s);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(buf, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == buf.size() && used > 0 && std::isfinite(value), ErrorKind::input,
            "malformed coefficient '" + std::string(whole) + "'");
    return value;
}

cplx parse_coefficient(std::string_view raw) {
    const std::string_view s = trim(raw);
    require(!s.empty(), ErrorKind::input, "empty coefficient");
    if (s.back() != 'i') {
        const std::string buf(s);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(buf, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == buf.size() && std::isfinite(value), ErrorKind::input,
                "malformed coefficient '" + buf + "'");
        return {value, 0.0};
    }
    const std::string_view body = s.substr(0, s.size() - 1);
    // Split at the last sign that is neither leading nor part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        return {0.0, parse_real(body, s)};
    }
    const std::string_view re_part = body.substr(0, split);
    require(!trim(re_part).empty(), ErrorKind::input, "malformed coefficient '" + std::string(s) + "'");
    return {parse_real(re_part, s), parse_real(body.substr(split), s)};
}

} // namespace

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_) {
        require(std::isfinite(c.real()) && std::isfinite(c.imag()), ErrorKind::input,
                "polynomial coefficients must be finite");
    }
    while (coeffs_.size() > 1 && coeffs_.back() == cplx{}) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        coeffs_.push_back(cplx{});
    }
}

Polynomial Polynomial::parse(std::string_view text) {
    std::vector<cplx> coeffs;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        coeffs.push_back(parse_coefficient(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return Polynomial(std::move(coeffs));
}

bool Polynomial::is_real(double tol) const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [tol](cplx c) { return std::abs(c.imag()) <= tol; });
}

cplx Polynomial::operator()(cplx z) const noexcept {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

double Polynomial::l1_norm() const noexcept {
    double s = 0.0;
    for (const auto& c : coeffs_) {
        s += std::abs(c);
    }
    return s;
}

double Polynomial::max_abs_coeff() const noexcept {
    double s = 0.0;
    for (const auto& c : coeffs_) {
        s = std::max(s, std::abs(c));
    }
    return s;
}

Polynomial Polynomial::rotated(double psi) const {
    std::vector<cplx> out(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        out[k] = coeffs_[k] * std::polar(1.0, psi * static_cast<double>(k));
    }
    return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (k > 0) {
            os << ',';
        }
        const cplx c = coeffs_[k];
        os << c.real();
        if (c.imag() != 0.0) {
            os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << 'i';
        }
    }
    return os.str();
}

ComplexMatrix ShiftTruncation::matrix() const {
    require(n >= 1, ErrorKind::input, "shift truncation needs n >= 1");
    if (kind == ShiftKind::right || kind == ShiftKind::left) {
        ComplexMatrix s = ComplexMatrix::Zero(n, n);
        for (Index i = 1; i < n; ++i) {
            s(i, i - 1) = 1.0;
        }
        return kind == ShiftKind::right ? s : ComplexMatrix(s.adjoint());
    }
    // sigma_n and Theta restricted to an n-window act identically:
    // (i, j) <- (i - 1, j - 1) on column-major vec.
    ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
    for (Index j = 1; j < n; ++j) {
        for (Index i = 1; i < n; ++i) {
            s(i + n * j, (i - 1) + n * (j - 1)) = 1.0;
        }
    }
    return s;
}

ComplexMatrix toeplitz_of(const Polynomial& poly, Index n) {
    require(n >= 1, ErrorKind::input, "toeplitz_of needs n >= 1");
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    const auto& a = poly.coeffs();
    for (Index j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < a.size() && j + static_cast<Index>(k) < n; ++k) {
            t(j + static_cast<Index>(k), j) = a[k];
        }
    }
    return t;
}

ComplexMatrix circulant_of(const Polynomial& poly, Index n) {
    require(n >= 1, ErrorKind::input, "circulant_of needs n >= 1");
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    const auto& a = poly.coeffs();
    for (Index j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            t((j + static_cast<Index>(k)) % n, j) += a[k];
        }
    }
    return t;
}

ComplexMatrix theta_apply(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), ErrorKind::input, "theta_apply: square window required");
    const Index w = a.rows();
    ComplexMatrix out = ComplexMatrix::Zero(w, w);
    if (w > 1) {
        out.bottomRightCorner(w - 1, w - 1) = a.topLeftCorner(w - 1, w - 1);
    }
    return out;
}

double sigma_conjugation_check(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), ErrorKind::input, "sigma_conjugation_check: square window required");
    require(a.rows() >= 3, ErrorKind::input, "sigma_conjugation_check: window must have size >= 3");
    const Index w = a.rows();
    const ComplexMatrix s = ShiftTruncation{w, ShiftKind::right}.matrix();
    const ComplexMatrix diff = theta_apply(a) - s * a * s.adjoint();
    return diff.block(1, 1, w - 2, w - 2).norm();
}

const char* to_string(Truncation t) noexcept {
    return t == Truncation::periodic ? "periodic" : "finite_section";
}

Truncation truncation_from_string(std::string_view s) {
    if (s == "periodic") {
        return Truncation::periodic;
    }
    if (s == "finite_section" || s == "finite-section" || s == "finite") {
        return Truncation::finite_section;
    }
    fail(ErrorKind::input, "unknown truncation '" + std::string(s) + "' (periodic | finite_section)");
}

SigmaPolyMap::SigmaPolyMap(const Polynomial& poly, Index n, Truncation truncation, double twist)
    : coeffs_(poly.rotated(twist).coeffs()), n_(n), truncation_(truncation) {
    require(n >= 1, ErrorKind::input, "SigmaPolyMap needs n >= 1");
}

ComplexMatrix SigmaPolyMap::shifted(const ComplexMatrix& a, Index k) const {
    ComplexMatrix out = ComplexMatrix::Zero(n_, n_);
    if (truncation_ == Truncation::periodic) {
        const Index s = ((k % n_) + n_) % n_;
        for (Index j = 0; j < n_; ++j) {
            for (Index i = 0; i < n_; ++i) {
                out((i + s) % n_, (j + s) % n_) = a(i, j);
            }
        }
        return out;
    }
    const Index len = n_ - std::abs(k);
    if (len <= 0) {
        return out;
    }
    if (k >= 0) {
        out.bottomRightCorner(len, len) = a.topLeftCorner(len, len);
    } else {
        out.topLeftCorner(len, len) = a.bottomRightCorner(len, len);
    }
    return out;
}

BlockVector SigmaPolyMap::apply(const BlockVector& x) const {
    require(x.size() == 1 && x.block_dim() == n_, ErrorKind::input, "SigmaPolyMap: shape mismatch");
    const ComplexMatrix a = x.block(0);
    ComplexMatrix out = ComplexMatrix::Zero(n_, n_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] != cplx{}) {
            out += coeffs_[k] * shifted(a, static_cast<Index>(k));
        }
    }
    BlockVector y(1, n_);
    y.set_block(0, out);
    return y;
}

BlockVector SigmaPolyMap::apply_adjoint(const BlockVector& x) const {
    require(x.size() == 1 && x.block_dim() == n_, ErrorKind::input, "SigmaPolyMap: shape mismatch");
    const ComplexMatrix a = x.block(0);
    ComplexMatrix out = ComplexMatrix::Zero(n_, n_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] != cplx{}) {
            out += std::conj(coeffs_[k]) * shifted(a, -static_cast<Index>(k));
        }
    }
    BlockVector y(1, n_);
    y.set_block(0, out);
    return y;
}

ComplexMatrix SigmaPolyMap::matrix() const {
    ComplexMatrix m(n_ * n_, n_ * n_);
    for (Index c = 0; c < n_ * n_; ++c) {
        BlockVector e(1, n_);
        e.stacked()(0, c) = 1.0;
        m.col(c) = apply(e).stacked().row(0).transpose();
    }
    return m;
}

namespace {

enum class NormTarget { vector, sigma };

std::unique_ptr<BlockMap> make_map(const Polynomial& poly, Index n, Index m, NormTarget target, Truncation truncation,
                                   double twist) {
    if (target == NormTarget::sigma) {
        return std::make_unique<SigmaPolyMap>(poly, n, truncation, twist);
    }
    const Polynomial rotated = poly.rotated(twist);
    ComplexMatrix coeffs =
        truncation == Truncation::periodic ? circulant_of(rotated, n) : toeplitz_of(rotated, n);
    return std::make_unique<BlockOperator>(std::move(coeffs), m);
}

// p in {1, inf}: ||T (x) Id_X|| is the max column / row absolute sum for any X.
PNormEstimate exact_block_estimate(const ComplexMatrix& t, Index m, const PExponent& p) {
    PNormEstimate est;
    est.converged = true;
    BlockVector w(t.cols(), m);
    const ComplexMatrix id = ComplexMatrix::Identity(m, m);
    if (p.is_one()) {
        Index col = 0;
        t.cwiseAbs().colwise().sum().maxCoeff(&col);
        ComplexMatrix unit = ComplexMatrix::Zero(m, m);
        unit(0, 0) = 1.0;
        w.set_block(col, unit);
    } else {
        Index row = 0;
        t.cwiseAbs().rowwise().sum().maxCoeff(&row);
        for (Index j = 0; j < t.cols(); ++j) {
            w.set_block(j, std::conj(phase(t(row, j))) * id);
        }
    }
    const BlockOperator op(t, m);
    est.value = mixed_norm(op.apply(w), p);
    est.witness = std::move(w);
    est.zero_operator = est.value == 0.0;
    return est;
}

ComplexMatrix scalar_matrix(const Polynomial& poly, Index n, Truncation truncation, double twist) {
    const Polynomial rotated = poly.rotated(twist);
    return truncation == Truncation::periodic ? circulant_of(rotated, n) : toeplitz_of(rotated, n);
}

BlockVector embed_scalar(const ComplexVector& x, Index m, NormTarget target) {
    if (target == NormTarget::sigma) {
        BlockVector w(1, x.size());
        w.set_block(0, x.asDiagonal().toDenseMatrix());
        return w;
    }
    BlockVector w(x.size(), m);
    w.stacked().col(0) = x;
    return w;
}

// Index of the circulant eigenvalue of largest modulus (see fourier_mode).
Index top_fourier_index(const Polynomial& rotated, Index n, double* modulus = nullptr) {
    Index best = 0;
    double top = -1.0;
    for (Index j = 0; j < n; ++j) {
        const double v = std::abs(rotated(std::polar(1.0, -two_pi * static_cast<double>(j) / static_cast<double>(n))));
        if (v > top) {
            top = v;
            best = j;
        }
    }
    if (modulus != nullptr) {
        *modulus = top;
    }
    return best;
}

// x_k = e^{2 pi i j k / n}: an eigenvector of every circulant, P(C_n) x = P(e^{-2 pi i j / n}) x.
ComplexVector fourier_mode(Index n, Index j) {
    ComplexVector x(n);
    for (Index k = 0; k < n; ++k) {
        x[k] = std::polar(1.0, two_pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
    }
    return x;
}

// p = 2: S^2 is a Hilbert space, so Id_{S^2_m} does not change the norm, and
// sigma / Theta split into shifts along the diagonals, the longest being the
// scalar one. Everything reduces to the top singular pair of the scalar
// matrix; circulants are normal, so their singular vectors are Fourier modes.
PNormEstimate hilbert_estimate(const Polynomial& poly, Index n, Index m, NormTarget target, Truncation truncation,
                               double twist) {
    ComplexVector top;
    if (truncation == Truncation::periodic) {
        top = fourier_mode(n, top_fourier_index(poly.rotated(twist), n));
    } else {
        top = singular_values(scalar_matrix(poly, n, truncation, twist)).right.col(0);
    }
    PNormEstimate est;
    est.witness = embed_scalar(top, m, target);
    est.witness.stacked() /= mixed_norm(est.witness, PExponent(2.0));
    est.converged = true;
    const auto op = make_map(poly, n, m, target, truncation, twist);
    est.value = mixed_norm(op->apply(est.witness), PExponent(2.0));
    est.zero_operator = est.value == 0.0;
    est.history.push_back(est.value);
    return est;
}

// The circulant eigenvectors with the largest eigenvalue moduli, used as warm starts.
std::vector<BlockVector> fourier_starts(const Polynomial& poly, Index n, Index m, NormTarget target, double twist,
                                        int count) {
    const Polynomial rotated = poly.rotated(twist);
    std::vector<std::pair<double, Index>> ranked;
    for (Index j = 0; j < n; ++j) {
        ranked.emplace_back(std::abs(rotated(std::polar(1.0, -two_pi * static_cast<double>(j) / static_cast<double>(n)))), j);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<BlockVector> starts;
    for (int c = 0; c < count && c < static_cast<int>(ranked.size()); ++c) {
        starts.push_back(embed_scalar(fourier_mode(n, ranked[static_cast<std::size_t>(c)].second), m, target));
    }
    return starts;
}

PNormEstimate run_at(const Polynomial& poly, const PExponent& p, Index n, Index m, NormTarget target,
                     const PolyNormConfig& cfg, double twist, int restarts, const std::vector<BlockVector>& extra) {
    if (p.is_two()) {
        return hilbert_estimate(poly, n, m, target, cfg.truncation, twist);
    }
    PNormConfig engine = cfg.engine;
    engine.restarts = restarts;
    if (cfg.truncation == Truncation::periodic && cfg.fourier_starts > 0) {
        for (auto& s : fourier_starts(poly, n, m, target, twist, cfg.fourier_starts)) {
            engine.starts.push_back(std::move(s));
        }
    }
    engine.starts.insert(engine.starts.end(), extra.begin(), extra.end());
    // P(shift) is a combination of contractions.
    engine.known_upper_bound = poly.l1_norm();
    const auto op = make_map(poly, n, m, target, cfg.truncation, twist);
    return estimate_pnorm(*op, p, engine);
}

PolyNormEstimate estimate_poly(const Polynomial& poly, const PExponent& p, Index n, Index m, NormTarget target,
                               const PolyNormConfig& cfg, const std::vector<std::pair<double, BlockVector>>& seeded = {}) {
    require(n >= 1 && m >= 1, ErrorKind::input, "truncation size n and block size m must be >= 1");
    PolyNormEstimate out;
    out.n = n;
    out.block_dim = target == NormTarget::sigma ? n : m;
    out.truncation = cfg.truncation;

    if (!p.is_interior()) {
        require(target == NormTarget::vector, ErrorKind::routing,
                "sigma_norm is estimated for 1 < p < inf only");
        out.estimate = exact_block_estimate(scalar_matrix(poly, n, cfg.truncation, 0.0), m, p);
        out.exact = true;
        return out;
    }
    out.exact = p.is_two();

    // Seeded starts only help at the twist they were built for.
    auto starts_for = [&](double twist) {
        std::vector<BlockVector> s;
        for (const auto& [psi, x] : seeded) {
            if (psi == twist) {
                s.push_back(x);
            }
        }
        return s;
    };
    auto value_at = [&](double twist, int restarts) {
        if (p.is_two()) {
            double modulus = 0.0;
            top_fourier_index(poly.rotated(twist), n, &modulus);
            return modulus;
        }
        return run_at(poly, p, n, m, target, cfg, twist, restarts, starts_for(twist)).value;
    };

    if (cfg.truncation == Truncation::finite_section || cfg.twist_grid <= 1 || poly.degree() == 0) {
        out.estimate = run_at(poly, p, n, m, target, cfg, 0.0, cfg.engine.restarts, starts_for(0.0));
        return out;
    }

    // Rotating by 2 pi / n is a relabeling of C_n, so psi lives on [0, period).
    const double period = two_pi / static_cast<double>(n);
    const double bound = poly.l1_norm() * (1.0 - 1e-12);
    std::vector<double> twists;
    for (const auto& s : seeded) {
        twists.push_back(s.first);
    }
    for (const double h : cfg.twist_hints) {
        twists.push_back(std::fmod(std::fmod(h, period) + period, period));
    }
    for (int j = 0; j < cfg.twist_grid; ++j) {
        twists.push_back(period * j / cfg.twist_grid);
    }
    const int scan_restarts =
        std::max(cfg.fourier_starts > 0 ? 0 : 1, std::min(cfg.twist_restarts, cfg.engine.restarts));
    double best_twist = 0.0;
    double best_value = -1.0;
    for (const double psi : twists) {
        const double v = value_at(psi, scan_restarts);
        if (v > best_value + 1e-13) {
            best_value = v;
            best_twist = psi;
        }
        if (best_value >= bound) {
            break;
        }
    }
    double refined = best_twist;
    if (cfg.twist_refine_steps > 0 && best_value < bound) {
        const double half = period / cfg.twist_grid;
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = best_twist - half;
        double hi = best_twist + half;
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = value_at(x1, scan_restarts);
        double f2 = value_at(x2, scan_restarts);
        for (int step = 2; step < cfg.twist_refine_steps; ++step) {
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = value_at(x1, scan_restarts);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = value_at(x2, scan_restarts);
            }
        }
        if (std::max(f1, f2) > best_value) {
            refined = f1 >= f2 ? x1 : x2;
        }
    }
    out.estimate = run_at(poly, p, n, m, target, cfg, refined, cfg.engine.restarts, starts_for(refined));
    out.twist = refined;
    if (refined != best_twist) {
        PNormEstimate at_best = run_at(poly, p, n, m, target, cfg, best_twist, cfg.engine.restarts, starts_for(best_twist));
        if (at_best.value > out.estimate.value) {
            out.estimate = std::move(at_best);
            out.twist = best_twist;
        }
    }
    // no wrap into [0, period): the value is invariant under that shift but the witness is not
    return out;
}

} // namespace

PolyNormEstimate poly_norm(const Polynomial& poly, const PExponent& p, Index n, const PolyNormConfig& cfg) {
    return estimate_poly(poly, p, n, 1, NormTarget::vector, cfg);
}

PolyNormEstimate poly_vector_norm(const Polynomial& poly, const PExponent& p, Index n, Index m,
                                  const PolyNormConfig& cfg) {
    return estimate_poly(poly, p, n, m, NormTarget::vector, cfg);
}

PolyNormEstimate sigma_norm(const Polynomial& poly, const PExponent& p, Index n, const PolyNormConfig& cfg) {
    return estimate_poly(poly, p, n, n, NormTarget::sigma, cfg);
}

NormChain norm_chain(const Polynomial& poly, const PExponent& p, Index n, const PolyNormConfig& cfg) {
    require(p.is_interior(), ErrorKind::routing, "norm_chain needs 1 < p < inf");
    NormChain chain;
    chain.scalar = poly_norm(poly, p, n, cfg);

    // diag(x) intertwines the shift with sigma_n and Theta_n: ||P(.) diag(x)|| = ||P(S) x||.
    const ComplexVector x = chain.scalar.estimate.witness.as_scalars();
    std::vector<std::pair<double, BlockVector>> seeds;
    seeds.emplace_back(chain.scalar.twist, embed_scalar(x, n, NormTarget::sigma));
    chain.sigma = estimate_poly(poly, p, n, n, NormTarget::sigma, cfg, seeds);

    // Periodic case: A -> n^{-1/p} (C^{-i} A C^i)_i is an isometry S^p_n -> l^p_n(S^p_n)
    // intertwining Theta_n with C_n (x) Id. The finite section only gets the diagonal seed.
    const ComplexMatrix a = chain.sigma.estimate.witness.block(0);
    BlockVector w(n, n);
    if (cfg.truncation == Truncation::periodic) {
        for (Index i = 0; i < n; ++i) {
            ComplexMatrix b(n, n);
            for (Index col = 0; col < n; ++col) {
                for (Index row = 0; row < n; ++row) {
                    b(row, col) = a((row + i) % n, (col + i) % n);
                }
            }
            w.set_block(i, b);
        }
    } else {
        w.stacked().col(0) = x;
    }
    const double twist = cfg.truncation == Truncation::periodic ? chain.sigma.twist : 0.0;
    chain.vector.n = n;
    chain.vector.block_dim = n;
    chain.vector.truncation = cfg.truncation;
    chain.vector.twist = twist;
    chain.vector.exact = p.is_two();
    chain.vector.estimate = run_at(poly, p, n, n, NormTarget::vector, cfg, twist, cfg.engine.restarts, {w});
    return chain;
}

double reevaluate_vector_witness(const Polynomial& poly, const PExponent& p, Index n, const BlockVector& witness,
                                 Truncation truncation, double twist) {
    const auto op = make_map(poly, n, witness.block_dim(), NormTarget::vector, truncation, twist);
    return mixed_norm(op->apply(witness), p);
}

CircleMax sup_circle_arg(const Polynomial& poly, int grid) {
    require(grid >= 8, ErrorKind::input, "sup_circle: grid must have at least 8 points");
    auto f = [&](double theta) { return std::abs(poly(std::polar(1.0, theta))); };
    const double h = two_pi / grid;
    std::vector<double> values(static_cast<std::size_t>(grid));
    for (int j = 0; j < grid; ++j) {
        values[static_cast<std::size_t>(j)] = f(h * j);
    }
    std::vector<int> peaks;
    for (int j = 0; j < grid; ++j) {
        const double v = values[static_cast<std::size_t>(j)];
        if (v >= values[static_cast<std::size_t>((j + grid - 1) % grid)] &&
            v >= values[static_cast<std::size_t>((j + 1) % grid)]) {
            peaks.push_back(j);
        }
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    });
    if (peaks.size() > 4) {
        peaks.resize(4);
    }
    CircleMax best{values[0], 0.0};
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (const int j : peaks) {
        double lo = h * (j - 1);
        double hi = h * (j + 1);
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = f(x1);
        double f2 = f(x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = f(x2);
            }
        }
        const double grid_value = values[static_cast<std::size_t>(j)];
        const double top = std::max({f1, f2, grid_value});
        if (top > best.value) {
            best.value = top;
            best.theta = top == grid_value ? h * j : (f1 >= f2 ? x1 : x2);
        }
    }
    best.theta = std::fmod(std::fmod(best.theta, two_pi) + two_pi, two_pi);
    return best;
}

double sup_circle(const Polynomial& poly, int grid) { return sup_circle_arg(poly, grid).value; }

const char* to_string(ExtremalVerdict v) noexcept {
    switch (v) {
    case ExtremalVerdict::same_sign: return "same-sign";
    case ExtremalVerdict::alternating: return "alternating";
    case ExtremalVerdict::neither: return "neither";
    }
    return "neither";
}

ExtremalClassification classify_extremal(const Polynomial& poly) {
    require(poly.is_real(), ErrorKind::out_of_scope, "classify_extremal needs real coefficients");
    const auto& a = poly.coeffs();
    require(std::none_of(a.begin(), a.end(), [](cplx c) { return c == cplx{}; }), ErrorKind::out_of_scope,
            "classify_extremal needs every coefficient nonzero");
    ExtremalClassification out;
    out.l1 = poly.l1_norm();
    bool same = true;
    bool alternating = true;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        const double prod = a[k].real() * a[k + 1].real();
        same = same && prod > 0.0;
        alternating = alternating && prod <= 0.0;
    }
    if (same) {
        out.verdict = ExtremalVerdict::same_sign;
    } else if (alternating) {
        out.verdict = ExtremalVerdict::alternating;
    }
    if (out.verdict != ExtremalVerdict::neither) {
        out.predicted_norm = out.l1;
    }
    return out;
}

const std::vector<Index>& default_truncation_ladder() {
    static const std::vector<Index> ladder{8, 16, 32, 64, 128};
    return ladder;
}

NormProfile norm_profile(const Polynomial& poly, const PExponent& p, const std::vector<Index>& ladder, Index block_dim,
                         const PolyNormConfig& cfg) {
    NormProfile profile;
    profile.poly = poly;
    profile.p = p.value();
    profile.block_dim = block_dim;
    profile.truncation = cfg.truncation;
    PolyNormConfig local = cfg;
    for (const Index n : ladder) {
        const PolyNormEstimate est = poly_vector_norm(poly, p, n, block_dim, local);
        NormProfileEntry entry;
        entry.n = n;
        entry.value = est.value();
        entry.converged = est.estimate.converged;
        entry.twist = est.twist;
        const double again = reevaluate_vector_witness(poly, p, n, est.estimate.witness, cfg.truncation, est.twist);
        entry.certified = std::abs(again - est.value()) <= 1e-10 * std::max(1.0, est.value());
        profile.entries.push_back(entry);
        if (cfg.truncation == Truncation::periodic) {
            local.twist_hints = cfg.twist_hints;
            local.twist_hints.push_back(est.twist);
        }
    }
    return profile;
}

GapSearchResult gap_search(const PExponent& p, int degree, const GapSearchConfig& cfg) {
    require(!p.is_two(), ErrorKind::input,
            "gap search is pointless at p = 2: ||P||_2 = ||P||_{2,S_2} = sup_{|z|=1} |P(z)| for every P");
    require(p.is_interior(), ErrorKind::routing, "gap search needs 1 < p < inf");
    require(degree >= 1, ErrorKind::input, "gap search needs degree >= 1");
    require(cfg.budget >= 1 && cfg.keep >= 1, ErrorKind::input, "gap search needs budget >= 1 and keep >= 1");

    GapSearchResult result;
    result.p = p.value();
    result.degree = degree;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int min_degree = std::min(2, degree);
    std::uniform_int_distribution<int> pick_degree(min_degree, degree);

    auto normalized = [](std::vector<cplx> c) {
        Polynomial raw(std::move(c));
        const double l1 = raw.l1_norm();
        std::vector<cplx> scaled = raw.coeffs();
        for (auto& x : scaled) {
            x /= l1;
        }
        return Polynomial(std::move(scaled));
    };
    auto better = [](const GapCandidate& a, const GapCandidate& b) {
        if (a.gap != b.gap) {
            return a.gap > b.gap;
        }
        return a.poly.degree() < b.poly.degree();
    };

    std::vector<GapCandidate> pool;
    for (int e = 0; e < cfg.budget; ++e) {
        Polynomial poly;
        const bool explore = e < cfg.budget / 2 || pool.size() < static_cast<std::size_t>(cfg.keep);
        if (explore) {
            const int d = pick_degree(rng);
            std::vector<cplx> c(static_cast<std::size_t>(d + 1));
            for (auto& x : c) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                x = cplx(re, im);
            }
            poly = normalized(std::move(c));
        } else {
            const auto& parent = pool[static_cast<std::size_t>(e) % pool.size()].poly;
            std::vector<cplx> c = parent.coeffs();
            for (auto& x : c) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                x += cfg.perturbation * cplx(re, im) / static_cast<double>(c.size());
            }
            poly = normalized(std::move(c));
        }
        PolyNormConfig norm_cfg = cfg.norm;
        norm_cfg.engine.seed = cfg.seed + static_cast<std::uint64_t>(e) * 1000003ULL;
        const auto scalar = poly_norm(poly, p, cfg.n, norm_cfg);
        const auto vec = poly_vector_norm(poly, p, cfg.n, cfg.block_dim, norm_cfg);
        GapCandidate cand;
        cand.poly = poly;
        cand.scalar_value = scalar.value();
        cand.vector_value = vec.value();
        cand.gap = cand.vector_value - cand.scalar_value;
        cand.witness = vec.estimate.witness;
        cand.twist = vec.twist;
        const double again = reevaluate_vector_witness(poly, p, cfg.n, cand.witness, cfg.norm.truncation, vec.twist);
        cand.certified = std::abs(again - cand.vector_value) <= 1e-8;
        pool.push_back(std::move(cand));
        std::stable_sort(pool.begin(), pool.end(), better);
        if (pool.size() > static_cast<std::size_t>(cfg.keep)) {
            pool.pop_back();
        }
        ++result.evaluated;
    }
    result.ranked = std::move(pool);
    return result;
}

} // namespace ncm
