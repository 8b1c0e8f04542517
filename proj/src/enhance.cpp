#include "odt/enhance.hpp"

#include <atomic>
#include <exception>

#include <unistd.h>

#include "odt/error.hpp"
#include "odt/io.hpp"
#include "odt/subprocess.hpp"
#include "odt/wavelet.hpp"

namespace odt {

std::string to_string(EnhancerKind k) {
  switch (k) {
    case EnhancerKind::identity: return "identity";
    case EnhancerKind::wavelet: return "wavelet";
    case EnhancerKind::external: return "external";
  }
  return "?";
}

EnhancerKind parse_enhancer_kind(const std::string& s) {
  for (auto k : {EnhancerKind::identity, EnhancerKind::wavelet, EnhancerKind::external})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown enhancer kind '" + s + "'");
}

void EnhancerContract::validate() const {
  if (kind == EnhancerKind::wavelet) {
    daubechies_filter(wavelet.wavelet);
    if (wavelet.levels < 1) throw ValidationError("wavelet levels must be >= 1");
    if (wavelet.threshold < 0.0) throw ValidationError("wavelet threshold must be >= 0");
  }
  if (kind == EnhancerKind::external) {
    if (command.find("{in}") == std::string::npos || command.find("{out}") == std::string::npos)
      throw ValidationError("external enhancer command must contain {in} and {out}");
    if (!(timeout_s > 0.0)) throw ValidationError("external enhancer timeout must be positive");
  }
}

namespace {

std::string substitute(std::string templ, const std::string& key, const std::string& value) {
  for (std::size_t pos = templ.find(key); pos != std::string::npos;
       pos = templ.find(key, pos + value.size()))
    templ.replace(pos, key.size(), value);
  return templ;
}

void check_geometry(const ProjectionStack& in, const ProjectionStack& out) {
  if (!in.same_geometry(out))
    throw RuntimeError("enhancer changed the stack geometry (axis, angles or frame dims)");
  out.validate();
}

std::filesystem::path fresh_work_dir() {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    const auto dir = base / ("odt-enhance-" + std::to_string(::getpid()) + "-" +
                             std::to_string(counter.fetch_add(1)));
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

}  // namespace

ProjectionStack external_enhance(const std::filesystem::path& stack_path,
                                 const std::string& command_template, double timeout_s) {
  const ProjectionStack input = io::read_stack(stack_path);
  const std::filesystem::path out_path = stack_path.string() + ".enhanced";
  std::filesystem::remove(out_path);
  std::filesystem::remove(io::sidecar_path(out_path));

  std::string cmd = substitute(command_template, "{in}", shell_quote(stack_path.string()));
  cmd = substitute(cmd, "{out}", shell_quote(out_path.string()));
  const CommandResult r = run_command(cmd, timeout_s);
  if (r.timed_out)
    throw RuntimeError("external enhancer timed out after " + std::to_string(timeout_s) +
                       " s\n" + r.output);
  if (r.exit_code != 0)
    throw RuntimeError("external enhancer exited with status " + std::to_string(r.exit_code) +
                       "\n" + r.output);

  ProjectionStack out;
  try {
    out = io::read_stack(out_path);
  } catch (const std::exception& e) {
    throw RuntimeError(std::string("external enhancer produced an unreadable stack: ") + e.what() +
                       "\n" + r.output);
  }
  check_geometry(input, out);
  out.provenance = Provenance::enhanced;
  return out;
}

ProjectionStack enhance_stack(const ProjectionStack& stack, const EnhancerContract& e) {
  stack.validate();
  e.validate();
  ProjectionStack out;
  switch (e.kind) {
    case EnhancerKind::identity:
      out = stack;
      break;
    case EnhancerKind::wavelet: {
      out = stack;
      const long n = static_cast<long>(stack.frames.size());
      std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
      for (long k = 0; k < n; ++k) {
        try {
          out.frames[static_cast<std::size_t>(k)] =
              wavelet_denoise(stack.frames[static_cast<std::size_t>(k)], e.wavelet.wavelet,
                              e.wavelet.levels, e.wavelet.threshold);
        } catch (...) {
#pragma omp critical(odt_enhance_error)
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
      break;
    }
    case EnhancerKind::external: {
      const bool temporary = e.work_dir.empty();
      const auto dir = temporary ? fresh_work_dir() : e.work_dir;
      std::filesystem::create_directories(dir);
      const auto in_path = dir / "input.pstk";
      io::write_stack(in_path, stack);
      try {
        out = external_enhance(in_path, e.command, e.timeout_s);
      } catch (...) {
        if (temporary) std::filesystem::remove_all(dir);
        throw;
      }
      if (temporary) std::filesystem::remove_all(dir);
      break;
    }
  }
  check_geometry(stack, out);
  out.provenance = Provenance::enhanced;
  return out;
}

}  // namespace odt
