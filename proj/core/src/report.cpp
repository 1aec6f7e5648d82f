#include "ecov/report.hpp"

#include "ecov/error.hpp"

namespace ecov {

void CertReport::set(std::string name, double value) {
    for (auto& kv : constants)
        if (kv.first == name) {
            kv.second = value;
            return;
        }
    constants.emplace_back(std::move(name), value);
}

bool CertReport::has(std::string_view name) const {
    for (const auto& kv : constants)
        if (kv.first == name) return true;
    return false;
}

double CertReport::at(std::string_view name) const {
    for (const auto& kv : constants)
        if (kv.first == name) return kv.second;
    throw contract_error("CertReport: unknown constant '" + std::string(name) + "'");
}

} // namespace ecov
