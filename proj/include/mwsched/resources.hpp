#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mwsched {

struct Resource {
    std::string id;
    double cpu = 1.0;               // compute units per time unit
    double bandwidth = 1.0;         // data units per time unit
    double cost_per_interval = 1.0; // currency per billing interval
    double billing_interval = 1.0;  // time units
};

// Non-empty list of resource types with positive, finite fields and distinct ids.
class ResourceCatalog {
public:
    ResourceCatalog() = default;
    // Throws Error(Schema) when an invariant is broken.
    explicit ResourceCatalog(std::vector<Resource> resources);

    std::span<const Resource> resources() const noexcept { return resources_; }
    const Resource& operator[](std::size_t r) const { return resources_.at(r); }
    std::size_t size() const noexcept { return resources_.size(); }
    bool empty() const noexcept { return resources_.empty(); }

    double mean_bandwidth() const noexcept { return mean_bandwidth_; }
    double mean_inverse_cpu() const noexcept { return mean_inverse_cpu_; }

private:
    std::vector<Resource> resources_;
    double mean_bandwidth_ = 0.0;
    double mean_inverse_cpu_ = 0.0;
};

// Six resource types with cpu 1..32 (powers of two), price growing as cpu^1.2,
// a shared bandwidth and a unit billing interval.
ResourceCatalog default_catalog();

inline constexpr double kDefaultBandwidth = 100.0;

} // namespace mwsched
