#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace dlrc {

enum class Activation { Tanh, Sine, ScaledTanh };

/// Node activation with an exact Lipschitz constant attached.
///
/// The supported set is closed so that every instance carries a known L and,
/// where it exists, an exact period:
///   tanh         f(x) = tanh(x),        L = 1
///   sine         f(x) = sin(x),         L = 1, period 2*pi
///   scaled-tanh  f(x) = gain * tanh(x), L = gain
/// All of them fix the origin, f(0) = 0.
class Nonlinearity {
public:
    static Nonlinearity tanh() { return Nonlinearity(Activation::Tanh, 1.0); }
    static Nonlinearity sine() { return Nonlinearity(Activation::Sine, 1.0); }
    static Nonlinearity scaled_tanh(double gain) {
        if (!(gain > 0.0)) throw std::invalid_argument("scaled_tanh: gain must be positive");
        return Nonlinearity(Activation::ScaledTanh, gain);
    }

    /// Parses "tanh", "sine" or "scaled-tanh"; gain applies to the latter only.
    static Nonlinearity from_name(const std::string& name, double gain = 1.0) {
        if (name == "tanh") return tanh();
        if (name == "sine") return sine();
        if (name == "scaled-tanh") return scaled_tanh(gain);
        throw std::invalid_argument("unknown nonlinearity: " + name);
    }

    double operator()(double x) const {
        switch (kind_) {
            case Activation::Tanh: return std::tanh(x);
            case Activation::Sine: return std::sin(x);
            case Activation::ScaledTanh: return gain_ * std::tanh(x);
        }
        return 0.0;  // unreachable
    }

    Activation kind() const { return kind_; }

    /// Exact Lipschitz constant L of f.
    double lipschitz_constant() const { return kind_ == Activation::ScaledTanh ? gain_ : 1.0; }

    /// Period P when f is periodic (sine), otherwise empty.
    std::optional<double> period() const {
        if (kind_ == Activation::Sine) return 2.0 * std::numbers::pi;
        return std::nullopt;
    }

    bool injective() const { return kind_ != Activation::Sine; }

    std::string name() const {
        switch (kind_) {
            case Activation::Tanh: return "tanh";
            case Activation::Sine: return "sine";
            case Activation::ScaledTanh: return "scaled-tanh";
        }
        return "";
    }

    double gain() const { return gain_; }

private:
    Nonlinearity(Activation kind, double gain) : kind_(kind), gain_(gain) {}

    Activation kind_;
    double gain_;
};

}  // namespace dlrc
