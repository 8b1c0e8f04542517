#pragma once

#include <filesystem>
#include <string>

#include "odt/projection.hpp"

namespace odt {

enum class EnhancerKind { identity, wavelet, external };

std::string to_string(EnhancerKind k);
EnhancerKind parse_enhancer_kind(const std::string& s);

struct WaveletParams {
  std::string wavelet = "db3";
  int levels = 4;
  double threshold = 0.7;
};

/// Projection-stack enhancer. For `external`, `command` is a shell template
/// in which {in} and {out} are replaced by quoted PSTK paths, e.g.
/// "infer --model m --in {in} --out {out}".
struct EnhancerContract {
  EnhancerKind kind = EnhancerKind::identity;
  WaveletParams wavelet;
  std::string command;
  double timeout_s = 3600.0;
  /// Where external stacks are exchanged; a fresh temporary directory if empty.
  std::filesystem::path work_dir;

  void validate() const;
};

/// Applies the enhancer frame-wise and checks that the geometry survived.
/// The result's provenance is `enhanced`; identity returns the frames unchanged.
ProjectionStack enhance_stack(const ProjectionStack& stack, const EnhancerContract& e);

/// Runs the external command on the PSTK at `stack_path`, writing to
/// `stack_path` with an ".enhanced" suffix, and returns the parsed output.
/// Throws RuntimeError carrying the command output on failure.
ProjectionStack external_enhance(const std::filesystem::path& stack_path,
                                 const std::string& command_template, double timeout_s);

}  // namespace odt
