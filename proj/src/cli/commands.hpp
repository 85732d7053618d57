#pragma once

#include "fuzz.hpp"
#include "instance_file.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace wdk::cli {

/// Exit-code contract of the command line.
enum Exit : int { kOk = 0, kPropertyFailure = 1, kUsage = 2 };

enum class Format { json, csv, text };
Format parse_format(const std::string& s);

struct Backends {
    std::optional<Dvr> flag;     ///< --backend, overrides the file
    std::optional<Dvr> fallback; ///< environment default for files without a backend line
};

/// `source` is a path or "demo:NAME".
InstanceFile load_instance(const std::string& source, const Backends& backends);

/// Command-line selections; unset fields fall back to the file's [demo] table.
struct Selection {
    std::optional<std::string> sigma;
    std::optional<std::string> point;
    std::optional<int> s;
    std::optional<std::uint64_t> seed;
};

int cmd_cotangent(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out);
int cmd_cotangent_b(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out);
int cmd_psi(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out);
int cmd_defect(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out);
int cmd_descent(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out, std::ostream& err);
int cmd_fuzz(const FuzzOptions& opts, Format fmt, std::ostream& out);
/// Runs the [demo] command of a file with its recorded selections.
int cmd_demo(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out, std::ostream& err);

/// Runs `fn`, turning library errors into a message on `err` and an exit code.
int guarded(const std::function<int()>& fn, std::ostream& err);

} // namespace wdk::cli
