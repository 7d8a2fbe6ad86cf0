#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#define SOLARCAST_VERSION "0.1.0"

namespace solarcast {

// Error taxonomy, mapped 1:1 onto CLI exit codes.
enum class ErrorKind {
    usage = 1,        // bad flags, bad config, misuse of the API
    data = 2,         // schema problems, unparseable values, empty inputs
    convergence = 3,  // iterative solves that failed to converge
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(std::string m) : Error(ErrorKind::usage, std::move(m)) {}
};
struct DataError : Error {
    explicit DataError(std::string m) : Error(ErrorKind::data, std::move(m)) {}
};
struct ConvergenceError : Error {
    explicit ConvergenceError(std::string m) : Error(ErrorKind::convergence, std::move(m)) {}
};

// Minimal stderr logger. Level comes from the SOLARCAST_LOG environment
// variable: debug|info|warn|error (default info).
enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

inline LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("SOLARCAST_LOG");
        if (!env) return LogLevel::info;
        std::string v(env);
        if (v == "debug") return LogLevel::debug;
        if (v == "warn") return LogLevel::warn;
        if (v == "error") return LogLevel::error;
        return LogLevel::info;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (level >= log_level()) {
        std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], msg.c_str());
    }
}

inline void log_debug(const std::string& m) { log(LogLevel::debug, m); }
inline void log_info(const std::string& m) { log(LogLevel::info, m); }
inline void log_warn(const std::string& m) { log(LogLevel::warn, m); }
inline void log_error(const std::string& m) { log(LogLevel::error, m); }

}  // namespace solarcast
