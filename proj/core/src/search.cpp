#include "genidx/search.hpp"

namespace genidx {

LinRegModel fit_linreg(std::span<const key_type> keys) {
    return fit_linreg(keys.size(), [&](std::size_t i) { return keys[i]; });
}

std::size_t lower_bound_pos(std::span<const key_type> keys, key_type probe,
                            SearchMethod method, const LinRegModel *model) {
    return lower_bound_pos(keys.size(), probe, method, model,
                           [&](std::size_t i) { return keys[i]; });
}

bool parse_layout(std::string_view name, DataLayout &out) {
    for (DataLayout l : all_layouts)
        if (to_string(l) == name) { out = l; return true; }
    return false;
}

bool parse_search(std::string_view name, SearchMethod &out) {
    for (SearchMethod s : all_search_methods)
        if (to_string(s) == name) { out = s; return true; }
    return false;
}

} // namespace genidx
