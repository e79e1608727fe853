#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oligocat {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class RingKind { Rational, PolyT, GF2 };

inline std::string ringName(RingKind k) {
    switch (k) {
        case RingKind::Rational: return "rational";
        case RingKind::PolyT: return "poly-t";
        case RingKind::GF2: return "gf2";
    }
    return "?";
}

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact scalar: a rational number, a polynomial in t over Q, or a GF(2) bit.
/// Polynomials are stored densely by degree with no trailing zero coefficients.
class RingElem {
public:
    RingElem() : kind_(RingKind::Rational), rat_(0) {}

    static RingElem zero(RingKind k) { return RingElem(k); }
    static RingElem one(RingKind k) {
        RingElem e(k);
        if (k == RingKind::PolyT)
            e.poly_ = {BigRat(1)};
        else if (k == RingKind::GF2)
            e.bit_ = true;
        else
            e.rat_ = 1;
        return e;
    }
    static RingElem fromInt(RingKind k, const BigInt& n) {
        RingElem e(k);
        if (k == RingKind::PolyT) {
            if (n != 0) e.poly_ = {BigRat(n)};
        } else if (k == RingKind::GF2) {
            e.bit_ = (n % 2) != 0;
        } else {
            e.rat_ = BigRat(n);
        }
        return e;
    }
    static RingElem fromRational(const BigRat& q) {
        RingElem e(RingKind::Rational);
        e.rat_ = q;
        return e;
    }
    /// The variable t in Q[t].
    static RingElem t() {
        RingElem e(RingKind::PolyT);
        e.poly_ = {BigRat(0), BigRat(1)};
        return e;
    }

    RingKind kind() const { return kind_; }

    bool isZero() const {
        switch (kind_) {
            case RingKind::Rational: return rat_ == 0;
            case RingKind::PolyT: return poly_.empty();
            case RingKind::GF2: return !bit_;
        }
        return false;
    }
    bool isOne() const { return *this == one(kind_); }

    friend RingElem operator+(const RingElem& a, const RingElem& b) {
        a.checkKind(b);
        RingElem r(a.kind_);
        switch (a.kind_) {
            case RingKind::Rational: r.rat_ = a.rat_ + b.rat_; break;
            case RingKind::GF2: r.bit_ = a.bit_ != b.bit_; break;
            case RingKind::PolyT: {
                r.poly_.resize(std::max(a.poly_.size(), b.poly_.size()), BigRat(0));
                for (size_t i = 0; i < a.poly_.size(); ++i) r.poly_[i] += a.poly_[i];
                for (size_t i = 0; i < b.poly_.size(); ++i) r.poly_[i] += b.poly_[i];
                r.trim();
                break;
            }
        }
        return r;
    }
    friend RingElem operator-(const RingElem& a) {
        RingElem r = a;
        switch (a.kind_) {
            case RingKind::Rational: r.rat_ = -r.rat_; break;
            case RingKind::GF2: break;
            case RingKind::PolyT:
                for (auto& c : r.poly_) c = -c;
                break;
        }
        return r;
    }
    friend RingElem operator-(const RingElem& a, const RingElem& b) { return a + (-b); }
    friend RingElem operator*(const RingElem& a, const RingElem& b) {
        a.checkKind(b);
        RingElem r(a.kind_);
        switch (a.kind_) {
            case RingKind::Rational: r.rat_ = a.rat_ * b.rat_; break;
            case RingKind::GF2: r.bit_ = a.bit_ && b.bit_; break;
            case RingKind::PolyT: {
                if (a.poly_.empty() || b.poly_.empty()) break;
                r.poly_.assign(a.poly_.size() + b.poly_.size() - 1, BigRat(0));
                for (size_t i = 0; i < a.poly_.size(); ++i)
                    for (size_t j = 0; j < b.poly_.size(); ++j)
                        r.poly_[i + j] += a.poly_[i] * b.poly_[j];
                r.trim();
                break;
            }
        }
        return r;
    }
    RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
    RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
    RingElem& operator*=(const RingElem& o) { return *this = *this * o; }

    bool isUnit() const {
        switch (kind_) {
            case RingKind::Rational: return rat_ != 0;
            case RingKind::GF2: return bit_;
            case RingKind::PolyT: return poly_.size() == 1 && poly_[0] != 0;
        }
        return false;
    }
    RingElem inverse() const {
        if (!isUnit()) throw RingError("inverse of a non-unit: " + str());
        RingElem r(kind_);
        switch (kind_) {
            case RingKind::Rational: r.rat_ = BigRat(1) / rat_; break;
            case RingKind::GF2: r.bit_ = true; break;
            case RingKind::PolyT: r.poly_ = {BigRat(1) / poly_[0]}; break;
        }
        return r;
    }

    RingElem pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        RingElem r = one(kind_), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const RingElem& a, const RingElem& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
            case RingKind::Rational: return a.rat_ == b.rat_;
            case RingKind::GF2: return a.bit_ == b.bit_;
            case RingKind::PolyT: return a.poly_ == b.poly_;
        }
        return false;
    }
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

    const BigRat& rational() const {
        if (kind_ != RingKind::Rational) throw RingError("not a rational");
        return rat_;
    }
    const std::vector<BigRat>& coeffs() const { return poly_; }

    /// Canonical textual form; polynomials read "2 - 3*t + t^2".
    std::string str() const {
        std::ostringstream os;
        switch (kind_) {
            case RingKind::Rational: os << rat_; break;
            case RingKind::GF2: os << (bit_ ? 1 : 0); break;
            case RingKind::PolyT: {
                if (poly_.empty()) {
                    os << 0;
                    break;
                }
                bool first = true;
                for (size_t d = 0; d < poly_.size(); ++d) {
                    const BigRat& c = poly_[d];
                    if (c == 0) continue;
                    BigRat a = c < 0 ? BigRat(-c) : c;
                    if (first) {
                        if (c < 0) os << "-";
                        first = false;
                    } else {
                        os << (c < 0 ? " - " : " + ");
                    }
                    if (d == 0) {
                        os << a;
                    } else {
                        if (a != 1) os << a << "*";
                        os << "t";
                        if (d > 1) os << "^" << d;
                    }
                }
                break;
            }
        }
        return os.str();
    }

private:
    explicit RingElem(RingKind k) : kind_(k), rat_(0), bit_(false) {}
    void checkKind(const RingElem& o) const {
        if (kind_ != o.kind_)
            throw RingError("mixed ring kinds: " + ringName(kind_) + " vs " + ringName(o.kind_));
    }
    void trim() {
        while (!poly_.empty() && poly_.back() == 0) poly_.pop_back();
    }

    RingKind kind_;
    BigRat rat_;
    std::vector<BigRat> poly_;
    bool bit_ = false;
};

inline RingElem operator*(const BigInt& n, const RingElem& e) {
    return RingElem::fromInt(e.kind(), n) * e;
}

}  // namespace oligocat
