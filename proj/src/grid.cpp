#include "modphi/grid.hpp"

#include <charconv>
#include <cmath>

#include "modphi/error.hpp"

namespace modphi {

EvaluationGrid EvaluationGrid::linspace(double a, double b, int count) {
    if (count < 1) throw DomainError("grid: count must be >= 1");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("grid: endpoints must be finite");
    EvaluationGrid grid;
    grid.u.reserve(count);
    if (count == 1) {
        grid.u.push_back(a);
        return grid;
    }
    for (int i = 0; i < count; ++i) {
        // Endpoints are reproduced exactly; symmetric grids stay symmetric.
        grid.u.push_back(i == count - 1 ? b : a + (b - a) * i / (count - 1));
    }
    return grid;
}

EvaluationGrid EvaluationGrid::parse(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
    if (second == std::string::npos) throw DomainError("grid: expected a:b:count, got '" + spec + "'");
    auto parse_double = [&](const std::string& text) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size()) throw DomainError("grid: bad number '" + text + "'");
        return value;
    };
    const double a = parse_double(spec.substr(0, first));
    const double b = parse_double(spec.substr(first + 1, second - first - 1));
    const std::string count_text = spec.substr(second + 1);
    int count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
        throw DomainError("grid: bad count '" + count_text + "'");
    }
    return linspace(a, b, count);
}

double sup_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) throw DomainError("sup_distance: size mismatch");
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::abs(a[i] - b[i]));
    return sup;
}

}  // namespace modphi
