#include "cazackit/sequence.hpp"

#include <string>

namespace cazackit {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Bjorck: return "bjorck";
    case Family::ZC: return "zc";
    case Family::Composite: return "composite";
    case Family::Raw: return "raw";
  }
  return "raw";
}

Family parse_family(std::string_view s) {
  if (s == "bjorck") return Family::Bjorck;
  if (s == "zc") return Family::ZC;
  if (s == "composite") return Family::Composite;
  if (s == "raw") return Family::Raw;
  throw ValidationError("unknown family '" + std::string(s) + "'");
}

std::string_view to_string(SetKind k) { return k == SetKind::CyclicShift ? "cyclic" : "root"; }

SetKind parse_set_kind(std::string_view s) {
  if (s == "cyclic") return SetKind::CyclicShift;
  if (s == "root") return SetKind::RootIndex;
  throw ValidationError("unknown set kind '" + std::string(s) + "'");
}

}  // namespace cazackit
