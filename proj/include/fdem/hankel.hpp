#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdem/error.hpp"
#include "fdem/types.hpp"

namespace fdem {

// Fixed-node digital filter for int_0^inf K(lambda) J_order(rho*lambda) dlambda.
// Node s sits at lambda_s = exp(t_s)/rho and the transform is
// (1/rho) * sum_s w_s K(lambda_s).
class HankelFilter {
public:
    HankelFilter(int order, std::vector<double> exponents, std::vector<double> weights,
                 std::string name = {});

    // Plain-text asset: '#' comment lines, then "exponent weight" per line.
    [[nodiscard]] static HankelFilter parse(std::string_view text, int order, std::string name = {});
    [[nodiscard]] static HankelFilter load(const std::filesystem::path& path, int order);
    // Shipped tables, embedded at build time.
    [[nodiscard]] static const HankelFilter& standard(int order);

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::span<const double> exponents() const noexcept { return exponents_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    [[nodiscard]] std::vector<double> nodes(double rho) const;

    // Sum pre-evaluated kernel values (one per node, in node order).
    [[nodiscard]] cplx apply(std::span<const cplx> kernel, double rho) const;

    template <class Kernel>
    [[nodiscard]] cplx transform(Kernel&& kernel, double rho) const
    {
        check_rho(rho);
        cplx acc{0.0, 0.0};
        for (std::size_t s = 0; s < weights_.size(); ++s) {
            const double lambda = std::exp(exponents_[s]) / rho;
            const cplx k = kernel(lambda);
            if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) throw QuadratureError(s, lambda);
            acc += weights_[s] * k;
        }
        return acc / rho;
    }

private:
    static void check_rho(double rho);

    int order_;
    std::vector<double> exponents_;
    std::vector<double> weights_;
    std::string name_;
};

template <class Kernel>
[[nodiscard]] cplx hankel_transform(Kernel&& kernel, int order, double rho)
{
    return HankelFilter::standard(order).transform(std::forward<Kernel>(kernel), rho);
}

}  // namespace fdem
