#pragma once

#include <stdexcept>
#include <string>

namespace residlab {

/// Bad configuration or command-line usage.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem or file-format failure; message carries the offending path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A non-finite coefficient appeared during time stepping.
struct BlowUpError : std::runtime_error {
    BlowUpError(long step_, int member_ = -1)
        : std::runtime_error(member_ >= 0
                                 ? "solution blew up at step " + std::to_string(step_) +
                                       " (ensemble member " + std::to_string(member_) + ")"
                                 : "solution blew up at step " + std::to_string(step_)),
          step(step_),
          member(member_) {}
    long step;
    int member;
};

}  // namespace residlab
