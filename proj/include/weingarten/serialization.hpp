#pragma once

// On-disk formats.  JSON carries configuration and models (numbers printed
// with 17 significant digits so reruns are byte-identical); CSV holds the
// per-sample profile tables; OBJ gives a quick surface-of-revolution preview.

#include <string>

#include "weingarten/ambient.hpp"
#include "weingarten/profile.hpp"
#include "weingarten/verify.hpp"
#include "weingarten/weingarten_function.hpp"

namespace weingarten {

inline constexpr int kFormatVersion = 1;

// %.17g — the one float format every serializer uses.
std::string format_g17(double v);

std::string family_to_json(const AmbientFamily& family, int indent = 0);
// {"kind": ..., "n": ..., "epsilon": ..., "domain": [a, b], "branches":
//  [{"mult": m, "alpha": "expr"}], "residues": [...]}; built-in kinds are
// reconstructed from (kind, n, epsilon) alone, custom branches are compiled
// from their expression strings.  Throws SchemaError on malformed input.
AmbientFamily family_from_json_text(const std::string& text);

// {"name": ..., "n": ..., "expr": "...", "theta": bool}; empty expr means a
// built-in referenced by name ("H2" or "Hr:2", "normA", "WS").
std::string weingarten_to_json(const WeingartenSpec& W, int indent = 0);
WeingartenSpec weingarten_from_fields(const std::string& name, int n, int epsilon,
                                      const std::string& expr, bool theta);
WeingartenSpec weingarten_from_json_text(const std::string& text, int epsilon);

// full model: topology, assembly bookkeeping, family, relation, raw samples
// per piece, and optionally the verification report.  Loading re-derives the
// curvature fields from the raw samples through the same code path that
// built them.
std::string model_to_json(const HypersurfaceModel& model, const WeingartenSpec& W,
                          const VerificationReport* report = nullptr);
HypersurfaceModel model_from_json_text(const std::string& text,
                                       WeingartenSpec* W_out = nullptr);

// header s,rho,rho_prime,phi,theta,k_min,k_max,H1,H2,S,K_tan,K_mix; phi is
// the assembled piece height (offset and reflection applied); K_tan/K_mix are
// the minima over branch pairs (K_tan is nan when n = 2).
std::string profile_csv(const Piece& piece);

// surface of revolution at r = sin(s) (spherical fiber) or r = tanh(s/2)
// (Poincaré ball), height t; one fundamental period for periodic models with
// the period recorded in the header comments.
std::string revolution_obj(const HypersurfaceModel& model, int segments = 48,
                           std::size_t max_rings = 400);

std::string read_file(const std::string& path);   // throws IoError
void write_file(const std::string& path, const std::string& contents);

}  // namespace weingarten
