#include "tvmdp/discount.hpp"

#include <cmath>
#include <stdexcept>

namespace tvmdp {

namespace {

void require_unit_range(const Rational& x, const char* what) {
    if (x < 0 || x >= 1) throw std::invalid_argument(std::string(what) + " must lie in [0,1)");
}

// log2 upper bound guaranteed to be strictly negative for x in (0,1).
Rational negative_log2_upper(const Rational& x) {
    for (unsigned grain = 64; grain <= (1u << 22); grain *= 2) {
        Rational u = log2_upper(x, grain);
        if (u < 0) return u;
    }
    throw std::logic_error("ratio is too close to 1 to bound its log");
}

}  // namespace

DiscountFunction::DiscountFunction(Variant v) : v_(std::move(v)) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) {
                require_unit_range(d.gamma, "constant discount factor");
            } else if constexpr (std::is_same_v<T, DownStepDiscount>) {
                require_unit_range(d.gamma, "down-step discount factor");
                if (d.step < 0) throw std::invalid_argument("down-step time must be >= 0");
            } else if constexpr (std::is_same_v<T, TwoPhaseDiscount>) {
                require_unit_range(d.first, "two-phase first factor");
                require_unit_range(d.second, "two-phase second factor");
                if (d.step < 0) throw std::invalid_argument("two-phase switch time must be >= 0");
            } else if constexpr (std::is_same_v<T, GeometricApproachDiscount>) {
                if (d.limit < 0 || d.limit > 1) throw std::invalid_argument("geometric-approach limit must lie in [0,1]");
                if (d.ratio <= 0 || d.ratio >= 1) throw std::invalid_argument("geometric-approach ratio must lie in (0,1)");
                if (d.limit == 1 && d.amplitude <= 0)
                    throw std::invalid_argument("geometric-approach with limit 1 needs a positive amplitude");
                if (d.amplitude < 0 && d.limit - d.amplitude >= 1)
                    throw std::invalid_argument("geometric-approach start value g(0) must lie below 1");
            } else if constexpr (std::is_same_v<T, TableDiscount>) {
                for (const auto& v : d.values) require_unit_range(v, "table entry");
                require_unit_range(d.tail, "table tail");
            }
        },
        v_);
}

DiscountFunction DiscountFunction::constant(Rational gamma) { return DiscountFunction(ConstantDiscount{std::move(gamma)}); }
DiscountFunction DiscountFunction::down_step(Rational gamma, BigInt step) {
    return DiscountFunction(DownStepDiscount{std::move(gamma), std::move(step)});
}
DiscountFunction DiscountFunction::two_phase(Rational first, Rational second, BigInt step) {
    return DiscountFunction(TwoPhaseDiscount{std::move(first), std::move(second), std::move(step)});
}
DiscountFunction DiscountFunction::geometric_approach(Rational limit, Rational amplitude, Rational ratio) {
    return DiscountFunction(GeometricApproachDiscount{std::move(limit), std::move(amplitude), std::move(ratio)});
}
DiscountFunction DiscountFunction::table(std::vector<Rational> values, Rational tail) {
    return DiscountFunction(TableDiscount{std::move(values), std::move(tail)});
}

Rational DiscountFunction::operator()(const BigInt& t) const {
    if (t < 0) throw std::invalid_argument("discount function evaluated at negative time");
    return std::visit(
        [&](const auto& d) -> Rational {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) {
                return d.gamma;
            } else if constexpr (std::is_same_v<T, DownStepDiscount>) {
                return t <= d.step ? d.gamma : Rational(0);
            } else if constexpr (std::is_same_v<T, TwoPhaseDiscount>) {
                return t <= d.step ? d.first : d.second;
            } else if constexpr (std::is_same_v<T, GeometricApproachDiscount>) {
                Rational v = d.limit - d.amplitude * rational_pow(d.ratio, t);
                return v < 0 ? Rational(0) : v;
            } else {
                if (t < BigInt(static_cast<unsigned long>(d.values.size())))
                    return d.values[t.get_ui()];
                return d.tail;
            }
        },
        v_);
}

double DiscountFunction::eval_double(const BigInt& t) const {
    if (t < 0) throw std::invalid_argument("discount function evaluated at negative time");
    if (const auto* d = std::get_if<GeometricApproachDiscount>(&v_)) {
        double v = to_double(d->limit) - to_double(d->amplitude) * std::pow(to_double(d->ratio), to_double(t));
        if (v < 0) v = 0;
        if (v >= 1) v = std::nextafter(1.0, 0.0);
        return v;
    }
    return to_double((*this)(t));
}

Rational DiscountFunction::limit() const {
    return std::visit(
        [](const auto& d) -> Rational {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>)
                return d.gamma;
            else if constexpr (std::is_same_v<T, DownStepDiscount>)
                return Rational(0);
            else if constexpr (std::is_same_v<T, TwoPhaseDiscount>)
                return d.second;
            else if constexpr (std::is_same_v<T, GeometricApproachDiscount>)
                return d.limit;
            else
                return d.tail;
        },
        v_);
}

std::size_t DiscountFunction::encoding_bits() const {
    return std::visit(
        [](const auto& d) -> std::size_t {
            using T = std::decay_t<decltype(d)>;
            auto step_bits = [](const BigInt& s) { return s == 0 ? std::size_t{1} : mpz_sizeinbase(s.get_mpz_t(), 2); };
            if constexpr (std::is_same_v<T, ConstantDiscount>) return rational_bit_size(d.gamma);
            if constexpr (std::is_same_v<T, DownStepDiscount>) return rational_bit_size(d.gamma) + step_bits(d.step);
            if constexpr (std::is_same_v<T, TwoPhaseDiscount>)
                return rational_bit_size(d.first) + rational_bit_size(d.second) + step_bits(d.step);
            if constexpr (std::is_same_v<T, GeometricApproachDiscount>)
                return rational_bit_size(d.limit) + rational_bit_size(d.amplitude) + rational_bit_size(d.ratio);
            if constexpr (std::is_same_v<T, TableDiscount>) {
                std::size_t bits = rational_bit_size(d.tail);
                for (const auto& v : d.values) bits += rational_bit_size(v);
                return bits;
            }
        },
        v_);
}

std::string DiscountFunction::family_name() const {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) return "constant";
            if constexpr (std::is_same_v<T, DownStepDiscount>) return "down_step";
            if constexpr (std::is_same_v<T, TwoPhaseDiscount>) return "two_phase";
            if constexpr (std::is_same_v<T, GeometricApproachDiscount>) return "geometric_approach";
            return "table";
        },
        v_);
}

namespace {

// Smallest T with 2*|amplitude|*ratio^T <= delta, found by a float guess
// plus exact adjustment.
BigInt geometric_time(const GeometricApproachDiscount& d, const Rational& delta) {
    Rational a2 = 2 * abs(d.amplitude);
    if (a2 == 0 || delta >= a2) return 0;
    double guess = std::log(to_double(delta) / to_double(a2)) / std::log(to_double(d.ratio));
    long t = guess > 0 ? static_cast<long>(std::ceil(guess)) : 0;
    if (t > 2000000 || !std::isfinite(guess)) {
        // Far beyond any materializable horizon; a conservative bound from
        // directed log estimates is enough.
        Rational num = log2_upper(a2) - log2_lower(delta);
        Rational den = -negative_log2_upper(d.ratio);
        BigInt out;
        mpz_cdiv_q(out.get_mpz_t(), Rational(num / den).get_num().get_mpz_t(),
                   Rational(num / den).get_den().get_mpz_t());
        return out < 0 ? BigInt(0) : out;
    }
    auto holds = [&](long step) { return a2 * rational_pow(d.ratio, BigInt(step)) <= delta; };
    while (!holds(t)) ++t;
    while (t > 0 && holds(t - 1)) --t;
    return BigInt(t);
}

}  // namespace

ConvergenceCertificate convergence_oracle(const DiscountFunction& g, const Rational& delta) {
    if (delta <= 0) throw std::invalid_argument("convergence oracle needs delta > 0");
    BigInt time = std::visit(
        [&](const auto& d) -> BigInt {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) {
                return 0;
            } else if constexpr (std::is_same_v<T, DownStepDiscount>) {
                return delta >= d.gamma ? BigInt(0) : BigInt(d.step + 1);
            } else if constexpr (std::is_same_v<T, TwoPhaseDiscount>) {
                return delta >= abs(d.first - d.second) ? BigInt(0) : BigInt(d.step + 1);
            } else if constexpr (std::is_same_v<T, GeometricApproachDiscount>) {
                return geometric_time(d, delta);
            } else {
                // Scan with suffix extrema: sup_{t>=T} |g(t)-g(T)| uses only
                // the largest and smallest later values.
                const long len = static_cast<long>(d.values.size());
                std::vector<Rational> smax(static_cast<std::size_t>(len) + 1), smin(static_cast<std::size_t>(len) + 1);
                smax[static_cast<std::size_t>(len)] = smin[static_cast<std::size_t>(len)] = d.tail;
                for (long i = len - 1; i >= 0; --i) {
                    smax[static_cast<std::size_t>(i)] = std::max(d.values[static_cast<std::size_t>(i)], smax[static_cast<std::size_t>(i) + 1]);
                    smin[static_cast<std::size_t>(i)] = std::min(d.values[static_cast<std::size_t>(i)], smin[static_cast<std::size_t>(i) + 1]);
                }
                for (long T = 0; T <= len; ++T) {
                    Rational gT = T < len ? d.values[static_cast<std::size_t>(T)] : d.tail;
                    if (smax[static_cast<std::size_t>(T)] - gT <= delta && gT - smin[static_cast<std::size_t>(T)] <= delta)
                        return BigInt(T);
                }
                return BigInt(len);
            }
        },
        g.data());
    return ConvergenceCertificate{delta, std::move(time), g.family_name()};
}

BigInt convergence_time_log2(const DiscountFunction& g, const Rational& log2_delta) {
    return std::visit(
        [&](const auto& d) -> BigInt {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) {
                return 0;
            } else if constexpr (std::is_same_v<T, DownStepDiscount>) {
                if (d.gamma == 0 || compare_pow2(log2_delta, d.gamma) >= 0) return 0;
                return BigInt(d.step + 1);
            } else if constexpr (std::is_same_v<T, TwoPhaseDiscount>) {
                Rational gap = abs(d.first - d.second);
                if (gap == 0 || compare_pow2(log2_delta, gap) >= 0) return 0;
                return BigInt(d.step + 1);
            } else if constexpr (std::is_same_v<T, GeometricApproachDiscount>) {
                Rational a2 = 2 * abs(d.amplitude);
                if (a2 == 0 || compare_pow2(log2_delta, a2) >= 0) return 0;
                Rational num = log2_upper(a2) - log2_delta;
                Rational den = -negative_log2_upper(d.ratio);
                Rational ratio = num / den;
                BigInt out;
                mpz_cdiv_q(out.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
                return out < 0 ? BigInt(0) : out;
            } else {
                const long len = static_cast<long>(d.values.size());
                for (long T = 0; T <= len; ++T) {
                    Rational gT = T < len ? d.values[static_cast<std::size_t>(T)] : d.tail;
                    bool ok = true;
                    for (long t = T; t <= len && ok; ++t) {
                        Rational gt = t < len ? d.values[static_cast<std::size_t>(t)] : d.tail;
                        Rational gap = abs(gt - gT);
                        if (gap != 0 && compare_pow2(log2_delta, gap) < 0) ok = false;
                    }
                    if (ok) return BigInt(T);
                }
                return BigInt(len);
            }
        },
        g.data());
}

}  // namespace tvmdp
