#include "depdetect/error.hpp"

namespace dd {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::io: return "io_error";
    case Errc::parse: return "parse_error";
    case Errc::label: return "label_error";
    case Errc::duplicate_id: return "duplicate_id_error";
    case Errc::arity: return "arity_error";
    case Errc::balance: return "balance_error";
    case Errc::split: return "split_error";
    case Errc::param: return "parameter_error";
    case Errc::fit: return "fit_error";
    case Errc::domain: return "domain_error";
    case Errc::tag: return "tag_error";
    case Errc::shape: return "shape_error";
    case Errc::format: return "format_error";
    case Errc::version: return "version_error";
    case Errc::integrity: return "integrity_error";
    case Errc::kind: return "kind_error";
    case Errc::config: return "config_error";
    case Errc::evaluation: return "evaluation_error";
    case Errc::profile: return "profile_error";
    case Errc::ingest: return "ingest_error";
    case Errc::internal: return "internal_error";
  }
  return "unknown_error";
}

}  // namespace dd
