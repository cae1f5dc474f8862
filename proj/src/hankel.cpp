#include "fdem/hankel.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fdem {

namespace detail {
extern const std::string_view kJ0FilterText;
extern const std::string_view kJ1FilterText;
}  // namespace detail

HankelFilter::HankelFilter(int order, std::vector<double> exponents, std::vector<double> weights,
                           std::string name)
    : order_(order), exponents_(std::move(exponents)), weights_(std::move(weights)), name_(std::move(name))
{
    if (order_ != 0 && order_ != 1) throw ValidationError({"filter order must be 0 or 1"});
    if (exponents_.empty() || exponents_.size() != weights_.size())
        throw ValidationError({"filter needs one weight per node"});
    for (std::size_t s = 1; s < exponents_.size(); ++s) {
        if (!(exponents_[s] > exponents_[s - 1]))
            throw ValidationError({"filter nodes must be strictly increasing"});
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) throw ValidationError({"filter weights must be finite"});
    }
}

HankelFilter HankelFilter::parse(std::string_view text, int order, std::string name)
{
    std::vector<double> t;
    std::vector<double> w;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        double a = 0.0;
        double b = 0.0;
        if (!(fields >> a >> b)) throw SchemaError("bad filter line " + std::to_string(lineno));
        t.push_back(a);
        w.push_back(b);
    }
    return HankelFilter(order, std::move(t), std::move(w), std::move(name));
}

HankelFilter HankelFilter::load(const std::filesystem::path& path, int order)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open filter file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), order, path.filename().string());
}

const HankelFilter& HankelFilter::standard(int order)
{
    static const HankelFilter j0 = parse(detail::kJ0FilterText, 0, "fdem_j0_v1");
    static const HankelFilter j1 = parse(detail::kJ1FilterText, 1, "fdem_j1_v1");
    if (order == 0) return j0;
    if (order == 1) return j1;
    throw ValidationError({"filter order must be 0 or 1"});
}

void HankelFilter::check_rho(double rho)
{
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError({"rho must be positive"});
}

std::vector<double> HankelFilter::nodes(double rho) const
{
    check_rho(rho);
    std::vector<double> out(exponents_.size());
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = std::exp(exponents_[s]) / rho;
    return out;
}

cplx HankelFilter::apply(std::span<const cplx> kernel, double rho) const
{
    check_rho(rho);
    if (kernel.size() != weights_.size()) throw ValidationError({"kernel length must match filter size"});
    cplx acc{0.0, 0.0};
    for (std::size_t s = 0; s < kernel.size(); ++s) {
        if (!std::isfinite(kernel[s].real()) || !std::isfinite(kernel[s].imag()))
            throw QuadratureError(s, std::exp(exponents_[s]) / rho);
        acc += weights_[s] * kernel[s];
    }
    return acc / rho;
}

}  // namespace fdem
