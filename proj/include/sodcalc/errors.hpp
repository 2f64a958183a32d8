#pragma once

#include <stdexcept>
#include <string>

namespace sodcalc {

enum class errc {
  invalid_n,
  invalid_d,
  nd_exceeds_m,
  param_mismatch,
  space_mismatch,
  no_rewrite_rule,
  bz_undefined,
  phi_block_unsupported,
  not_guaranteed_no_explanation,
  not_composite,
  rule_not_applicable,
  prefix_not_ck,
  simplification_blocked,
  certification_failed,
  induction_step_failed,
  relabel_mismatch,
  invalid_preset,
  parse_error,
  unbound_name,
  ambiguous_block,
  bad_trace,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_n: return "InvalidN";
    case errc::invalid_d: return "InvalidD";
    case errc::nd_exceeds_m: return "NdExceedsM";
    case errc::param_mismatch: return "ParamMismatch";
    case errc::space_mismatch: return "SpaceMismatch";
    case errc::no_rewrite_rule: return "NoRewriteRule";
    case errc::bz_undefined: return "BZUndefined";
    case errc::phi_block_unsupported: return "PhiBlockUnsupported";
    case errc::not_guaranteed_no_explanation: return "NotGuaranteedNoExplanation";
    case errc::not_composite: return "NotComposite";
    case errc::rule_not_applicable: return "RuleNotApplicable";
    case errc::prefix_not_ck: return "PrefixNotCk";
    case errc::simplification_blocked: return "SimplificationBlocked";
    case errc::certification_failed: return "CertificationFailed";
    case errc::induction_step_failed: return "InductionStepFailed";
    case errc::relabel_mismatch: return "RelabelMismatch";
    case errc::invalid_preset: return "InvalidPreset";
    case errc::parse_error: return "ParseError";
    case errc::unbound_name: return "UnboundName";
    case errc::ambiguous_block: return "AmbiguousBlock";
    case errc::bad_trace: return "BadTrace";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace sodcalc
