#include "kompaneets/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace kompaneets {

void GridSpec::validate() const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
        throw std::invalid_argument("grid needs finite x_min < x_max");
    }
    if (cells < 8) throw std::invalid_argument("grid needs at least 8 cells");
}

CellField::CellField(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.cells) {
        throw std::invalid_argument("field length does not match grid");
    }
}

}  // namespace kompaneets
