#include "mwsched/resources.hpp"

#include "mwsched/error.hpp"

#include <cmath>
#include <unordered_set>

namespace mwsched {

namespace {

void require_positive(double v, std::size_t r, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::Schema,
                    "resources[" + std::to_string(r) + "]." + field + ": must be a positive finite number");
    }
}

} // namespace

ResourceCatalog::ResourceCatalog(std::vector<Resource> resources) : resources_(std::move(resources)) {
    if (resources_.empty()) throw Error(ErrorKind::Schema, "resources: catalog must not be empty");
    std::unordered_set<std::string> ids;
    double bw = 0.0;
    double inv = 0.0;
    for (std::size_t r = 0; r < resources_.size(); ++r) {
        const auto& res = resources_[r];
        if (!ids.insert(res.id).second) {
            throw Error(ErrorKind::Schema, "resources[" + std::to_string(r) + "].id: duplicate id '" + res.id + "'");
        }
        require_positive(res.cpu, r, "cpu");
        require_positive(res.bandwidth, r, "bandwidth");
        require_positive(res.cost_per_interval, r, "cost_per_interval");
        require_positive(res.billing_interval, r, "billing_interval");
        bw += res.bandwidth;
        inv += 1.0 / res.cpu;
    }
    mean_bandwidth_ = bw / static_cast<double>(resources_.size());
    mean_inverse_cpu_ = inv / static_cast<double>(resources_.size());
}

ResourceCatalog default_catalog() {
    std::vector<Resource> out;
    for (int k = 0; k < 6; ++k) {
        const double cpu = std::ldexp(1.0, k);
        out.push_back({"r" + std::to_string(k) + "-cu" + std::to_string(1 << k), cpu, kDefaultBandwidth,
                       std::pow(cpu, 1.2), 1.0});
    }
    return ResourceCatalog(std::move(out));
}

} // namespace mwsched
