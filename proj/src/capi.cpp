#include <eqp.h>

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <utility>

#include <json.hpp>

#include "common.hpp"
#include "deweak.hpp"
#include "equivariant.hpp"
#include "homology.hpp"
#include "io.hpp"

struct eqp_presentation {
  eqp::EquivariantPresentation ep;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

eqp_status status_of(eqp::errc c) {
  switch (c) {
    case eqp::errc::cap_exceeded:
      return EQP_CAP_EXCEEDED;
    case eqp::errc::internal:
    case eqp::errc::malformed_step:
      return EQP_INTERNAL;
    case eqp::errc::action_not_well_defined:
      return EQP_CHECK_FAILED;
    default:
      return EQP_BAD_INPUT;
  }
}

// All entry points funnel through here so no exception crosses the C
// boundary.
template <typename F>
eqp_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const eqp::error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EQP_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return EQP_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

eqp_status null_argument() {
  g_last_error = "null argument";
  return EQP_BAD_INPUT;
}

std::size_t cosets_or_default(size_t max_cosets) { return max_cosets ? max_cosets : 1000000; }

}  // namespace

extern "C" {

const char* eqp_version(void) { return "0.1.0"; }

const char* eqp_last_error(void) { return g_last_error.c_str(); }

void eqp_string_free(char* s) { std::free(s); }

void eqp_presentation_free(eqp_presentation* p) { delete p; }

eqp_status eqp_presentation_from_json(const char* json_text, eqp_presentation** out) {
  if (!(json_text && out)) return null_argument();
  return guarded([&] {
    *out = new eqp_presentation{eqp::load_presentation(json_text)};
    return EQP_OK;
  });
}

eqp_status eqp_builtin(const char* name, int n, eqp_presentation** out) {
  if (!(name && out)) return null_argument();
  return guarded([&] {
    *out = new eqp_presentation{eqp::builtin(name, n)};
    return EQP_OK;
  });
}

eqp_status eqp_presentation_to_json(const eqp_presentation* p, char** json_out) {
  if (!(p && json_out)) return null_argument();
  return guarded([&] {
    *json_out = dup_string(eqp::save_presentation(p->ep));
    return EQP_OK;
  });
}

eqp_status eqp_verify(const eqp_presentation* p, size_t max_cosets, long long expect_order,
                      char** report_json) {
  if (!(p && report_json)) return null_argument();
  return guarded([&] {
    eqp::ValidationReport vr = eqp::validate(p->ep, cosets_or_default(max_cosets));
    if (expect_order >= 0) {
      bool match = vr.realized_order == static_cast<std::size_t>(expect_order);
      vr.checks.push_back({"expected_order",
                           match,
                           "realized order " + std::to_string(vr.realized_order) + ", expected " +
                               std::to_string(expect_order)});
    }
    *report_json = dup_string(eqp::validation_report_json(vr));
    return vr.all_passed() ? EQP_OK : EQP_CHECK_FAILED;
  });
}

eqp_status eqp_deweak(const eqp_presentation* p, size_t max_cosets, eqp_presentation** finite_out,
                      char** bundle_json) {
  if (!(p && finite_out && bundle_json)) return null_argument();
  return guarded([&] {
    eqp::DeweakResult r = eqp::deweakify(p->ep, cosets_or_default(max_cosets));
    *bundle_json = dup_string(eqp::bundle_json(r.bundle, p->ep.ctx));
    *finite_out = new eqp_presentation{std::move(r.output)};
    return EQP_OK;
  });
}

eqp_status eqp_trace_check(const eqp_presentation* p, const char* bundle_json,
                           char** report_json) {
  if (!(p && bundle_json && report_json)) return null_argument();
  return guarded([&] {
    const eqp::ActionContext& ctx = p->ep.ctx;
    eqp::CertificateBundle b = eqp::parse_bundle(bundle_json, ctx);
    std::vector<eqp::SymbolRef> symbols = ctx.symbols();

    json failures = json::array();
    for (std::size_t i = 0; i < b.traces.size(); ++i) {
      const eqp::DerivationTrace& tr = b.traces[i];
      eqp::SymbolRef s = symbols[i / symbols.size()];
      eqp::SymbolRef t = symbols[i % symbols.size()];
      std::string reason;

      eqp::RawWord conj{{s, 1}, {t, 1}, {s, -1}};
      if (tr.start != conj) {
        reason = "start is not the conjugation relator";
      } else {
        eqp::RawWord w = tr.start;
        for (std::size_t k = 0; k < tr.steps.size() && reason.empty(); ++k) {
          try {
            eqp::replay_step(w, tr.steps[k], b.r0prime, ctx);
          } catch (const eqp::error& e) {
            reason = "step " + std::to_string(k) + ": " + e.what();
          }
        }
        if (reason.empty() && w != tr.end) reason = "replay does not land on the recorded end word";
        if (reason.empty() && p->ep.weak) {
          eqp::SymbolRef img = ctx.act_symbol(ctx.iota_element(s.orbit, s.point), t);
          if (tr.end != eqp::RawWord{{img, 1}}) reason = "end word is not the conjugated symbol";
        }
      }
      if (!reason.empty())
        failures.push_back(json{{"index", i},
                                {"reason", reason},
                                {"s", eqp::symbol_name(ctx, s)},
                                {"t", eqp::symbol_name(ctx, t)}});
    }

    json rep{{"all_passed", failures.empty()},
             {"failures", failures},
             {"traces_checked", b.traces.size()}};
    *report_json = dup_string(rep.dump(2) + "\n");
    return failures.empty() ? EQP_OK : EQP_CHECK_FAILED;
  });
}

eqp_status eqp_h2(const eqp_presentation* p, char** report_json) {
  if (!(p && report_json)) return null_argument();
  return guarded([&] {
    eqp::HomologyReport hr = eqp::homology_report(p->ep);
    *report_json = dup_string(eqp::homology_report_json(hr));
    return hr.diagnostics.all_passed() ? EQP_OK : EQP_CHECK_FAILED;
  });
}

eqp_status eqp_abelianize(const eqp_presentation* p, char** json_out) {
  if (!(p && json_out)) return null_argument();
  return guarded([&] {
    eqp::ExpandedPresentation ex = eqp::expand_R(p->ep);
    std::vector<eqp::FlatWord> flat;
    flat.reserve(ex.relators.size());
    for (const eqp::Word& w : ex.relators) flat.push_back(eqp::flatten(p->ep.ctx, w));
    eqp::AbelianInvariants ab = eqp::abelianization(p->ep.ctx.symbol_count(), flat);
    *json_out = dup_string(eqp::abelianization_json(ab));
    return EQP_OK;
  });
}

eqp_status eqp_orbits(const eqp_presentation* p, char** json_out) {
  if (!(p && json_out)) return null_argument();
  return guarded([&] {
    *json_out = dup_string(eqp::orbits_json(p->ep.ctx));
    return EQP_OK;
  });
}

}  // extern "C"
