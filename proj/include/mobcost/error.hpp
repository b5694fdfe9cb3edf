#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mobcost {

/// Input or domain violation. The message is prefixed with the module that
/// rejected the input, e.g. "graph-core: node 3 unreachable from node 0".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace mobcost
