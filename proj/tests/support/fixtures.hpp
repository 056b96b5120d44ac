#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mingain/core.hpp"

namespace mingain::testing {

/// Code of the Error thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<ErrorCode> thrown_code(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline Frame t3_frame()
{
    return Frame({"t1", "t2", "t3"});
}

inline BPA first_bpa(const Frame& f = t3_frame())
{
    std::vector<MassAssignment> a{{{"t1", "t2"}, 0.8}, {{"t1", "t2", "t3"}, 0.2}};
    return make_bpa(f, a);
}

inline BPA second_bpa(const Frame& f = t3_frame())
{
    std::vector<MassAssignment> a{{{"t2", "t3"}, 0.7}, {{"t3"}, 0.2}, {{"t1", "t2", "t3"}, 0.1}};
    return make_bpa(f, a);
}

inline Proposition prop(const Frame& f, std::vector<std::string> labels)
{
    return Proposition::from_labels(f, labels);
}

inline std::string data_path(const std::string& name)
{
    return std::string(MINGAIN_DATA_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name)
{
    return std::string(MINGAIN_GOLDEN_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace mingain::testing
