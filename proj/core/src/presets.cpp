// Copyright 2026 The cmtlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <stdexcept>

#include "cmtlab/experiments.hpp"

namespace cmt {

const std::string& config_schema() {
  static const std::string schema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "$id": "https://cmtlab.invalid/config.schema.json",
  "title": "cmtlab experiment config",
  "type": "object",
  "additionalProperties": false,
  "required": ["experiment", "model"],
  "properties": {
    "experiment": {"enum": ["phase-space", "tomo", "krylov", "perturb", "rmt-compare", "ordered-bloch"]},
    "model": {
      "type": "object",
      "required": ["type"],
      "oneOf": [
        {
          "additionalProperties": false,
          "properties": {
            "type": {"const": "kicked-top"},
            "j": {"type": "number", "exclusiveMinimum": 0, "description": "spin, 2j integer"},
            "lambda": {"type": "number", "default": 2.5},
            "alpha": {"type": "number", "default": 1.5707963267948966}
          }
        },
        {
          "additionalProperties": false,
          "properties": {
            "type": {"const": "kicked-ising"},
            "L": {"type": "integer", "minimum": 2, "maximum": 10},
            "J": {"type": "number", "default": 1.0},
            "hx": {"type": "number", "default": 1.4},
            "hz": {"type": "number", "default": 1.4}
          }
        },
        {
          "additionalProperties": false,
          "properties": {
            "type": {"const": "tilted-ising"},
            "L": {"type": "integer", "minimum": 2, "maximum": 10},
            "J": {"type": "number", "default": 1.0},
            "hx": {"type": "number", "default": 1.4},
            "hz": {"type": "number", "default": 1.4},
            "dt": {"type": "number", "exclusiveMinimum": 0, "default": 1.0}
          }
        },
        {
          "additionalProperties": false,
          "properties": {
            "type": {"const": "xxz"},
            "L": {"type": "integer", "minimum": 2, "maximum": 10},
            "Jxy": {"type": "number", "default": 1.0},
            "Jzz": {"type": "number", "default": 1.1},
            "g": {"type": "number", "default": 0.0},
            "site": {"type": "integer", "minimum": 1, "description": "1-based impurity site, at most L"},
            "dt": {"type": "number", "exclusiveMinimum": 0, "default": 1.0},
            "impurity_axis": {"enum": ["x", "y", "z"], "default": "z"}
          }
        }
      ]
    },
    "observable": {
      "type": "string",
      "description": "J_x, J_y, J_z, random-J_x (kicked top); s<k><axis>, S<axis>, random-local (chains); terms joined by '+'"
    },
    "steps": {"type": "integer", "minimum": 1, "maximum": 100000,
              "description": "record length N; tomo on the kicked top defaults to 2 d^2, otherwise 50"},
    "sigma": {"type": "number", "minimum": 0, "default": 0.1},
    "n_states": {"type": "integer", "minimum": 1,
                 "description": "states averaged (tomo 50, perturb 100, ordered-bloch 50); orbits for phase-space"},
    "sweep": {
      "type": "object",
      "additionalProperties": false,
      "required": ["values"],
      "properties": {
        "param": {"enum": ["none", "j", "lambda", "alpha", "L", "J", "hx", "hz", "dt", "Jxy", "Jzz", "g", "site",
                           "sigma", "delta_lambda", "eta", "theta", "phi"], "default": "none"},
        "values": {"type": "array", "minItems": 1, "items": {"type": "number"}}
      }
    },
    "seed": {"type": "integer", "minimum": 0, "default": 1},
    "output": {"type": "string", "description": "CSV path; empty or '-' writes to stdout"},
    "state": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "kind": {"enum": ["haar", "coherent"], "default": "haar"},
        "theta": {"type": "number", "minimum": 0, "maximum": 3.141592653589793, "default": 2.04},
        "phi": {"type": "number", "default": 2.42}
      }
    },
    "stride": {"type": "integer", "minimum": 1, "default": 1, "description": "reporting stride along the step axis"},
    "delta_lambda": {"type": "number", "default": 0.01},
    "eta": {"type": "number", "minimum": 0, "maximum": 1, "default": 0},
    "include_ideal": {"type": "boolean", "default": true},
    "quadrature": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "n_theta": {"type": "integer", "minimum": 2, "default": 64},
        "n_phi": {"type": "integer", "minimum": 2, "default": 128}
      }
    },
    "rmt": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "ensemble": {"enum": ["GOE", "GUE", "CUE", "COE"], "default": "COE"},
        "samples": {"type": "integer", "minimum": 1, "default": 10},
        "reflection_blocks": {"type": "boolean", "default": true}
      }
    },
    "rank_tol": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 1e-10},
    "solver": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "kkt_tol": {"type": "number", "exclusiveMinimum": 0, "default": 1e-7},
        "max_iter": {"type": "integer", "minimum": 1, "default": 5000},
        "polish_tol": {"type": "number", "exclusiveMinimum": 0, "default": 1e-10},
        "polish_iter": {"type": "integer", "minimum": 0, "default": 500}
      }
    },
    "threads": {"type": "integer", "minimum": 0, "maximum": 1024, "default": 0},
    "provenance": {"type": "string"}
  }
}
)json";
  return schema;
}

namespace {

std::vector<Preset> make_presets() {
  return {
      {"fig2.1-phase-space", "Fig. 2.1 caption: alpha = pi/2, lambda in {0.5, 2.5, 3.0, 6.5}; orbit count, j and N are artifact defaults",
       R"({"experiment": "phase-space",
           "model": {"type": "kicked-top", "j": 20, "alpha": 1.5707963267948966},
           "observable": "J_y", "steps": 300, "n_states": 20, "stride": 10,
           "sweep": {"param": "lambda", "values": [0.5, 2.5, 3.0, 6.5]}})"},
      {"fig2.3-krylov-complexity", "Fig. 2.3 caption: tilted Ising L = 5, J = 1, hx = 1.4, O = S_z, hz varied; hz values are artifact defaults",
       R"({"experiment": "krylov",
           "model": {"type": "tilted-ising", "L": 5, "J": 1.0, "hx": 1.4, "hz": 1.4, "dt": 0.1},
           "observable": "Sz", "steps": 400, "stride": 4,
           "sweep": {"param": "hz", "values": [0.0, 0.4, 1.4]}})"},
      {"fig2.4-krylov-dim", "Fig. 2.4 caption: tilted Ising J = 1, hz = 1.4, O = s_1^y, L in {2, 3, 4}; hx = 1.4 as the nonintegrable point",
       R"({"experiment": "krylov",
           "model": {"type": "tilted-ising", "L": 2, "J": 1.0, "hx": 1.4, "hz": 1.4},
           "observable": "s1y", "steps": 20,
           "sweep": {"param": "L", "values": [2, 3, 4]}})"},
      {"fig3.1-coherent", "Fig. 3.1 caption: j = 20, theta = 2.04, phi = 2.42, alpha = pi/2; N = 2 d^2 and sigma = 0.1 are artifact defaults",
       R"({"experiment": "tomo",
           "model": {"type": "kicked-top", "j": 20, "alpha": 1.5707963267948966},
           "observable": "J_y", "sigma": 0.1, "n_states": 10, "stride": 41,
           "state": {"kind": "coherent", "theta": 2.04, "phi": 2.42},
           "sweep": {"param": "lambda", "values": [0.5, 2.5, 7.0]}})"},
      {"fig3.1-random", "Fig. 3.1 caption: 50 Haar random states, j = 10, alpha = pi/2; N = 2 d^2 and sigma = 0.1 are artifact defaults",
       R"({"experiment": "tomo",
           "model": {"type": "kicked-top", "j": 10, "alpha": 1.5707963267948966},
           "observable": "J_y", "sigma": 0.1, "n_states": 50, "stride": 21,
           "sweep": {"param": "lambda", "values": [0.5, 2.5, 7.0]}})"},
      {"fig3.3-ordered-bloch", "Fig. 3.3 caption: ordered Bloch values, descending and ascending; j and state count are artifact defaults",
       R"({"experiment": "ordered-bloch",
           "model": {"type": "kicked-top", "j": 10, "alpha": 1.5707963267948966},
           "n_states": 50, "stride": 5})"},
      {"fig3.6-husimi", "Fig. 3.6 caption: Husimi entropy of operators evolved from O = J_y; j and lambda values are artifact defaults",
       R"({"experiment": "phase-space",
           "model": {"type": "kicked-top", "j": 10, "alpha": 1.5707963267948966},
           "observable": "J_y", "steps": 50, "n_states": 1,
           "sweep": {"param": "lambda", "values": [0.5, 2.5, 7.0]}})"},
      {"fig4.2-tki-quantifiers", "Fig. 4.2 caption: kicked Ising L = 5, J = 1, hx = 1.4, O = s_1^y, hz in {0, 0.4, 1.4}",
       R"({"experiment": "tomo",
           "model": {"type": "kicked-ising", "L": 5, "J": 1.0, "hx": 1.4, "hz": 1.4},
           "observable": "s1y", "steps": 1100, "stride": 50, "n_states": 80,
           "sweep": {"param": "hz", "values": [0.0, 0.4, 1.4]}})"},
      {"fig4.6-rmt", "Fig. 4.6 caption: kicked Ising L = 5, J = 1, hx = 1.4, random local observable, COE comparison",
       R"({"experiment": "rmt-compare",
           "model": {"type": "kicked-ising", "L": 5, "J": 1.0, "hx": 1.4, "hz": 1.4},
           "observable": "random-local", "steps": 1100, "stride": 50,
           "rmt": {"ensemble": "COE", "samples": 10, "reflection_blocks": true},
           "sweep": {"param": "hz", "values": [0.0, 0.4, 1.4]}})"},
      {"fig4.7-chain-length", "Fig. 4.7 caption: kicked Ising J = 1, hx = 1.4, O = s_1^y, L in {2, 3, 4}, hz = 1.4 shown",
       R"({"experiment": "tomo",
           "model": {"type": "kicked-ising", "L": 2, "J": 1.0, "hx": 1.4, "hz": 1.4},
           "observable": "s1y", "steps": 300, "stride": 10, "n_states": 80,
           "sweep": {"param": "L", "values": [2, 3, 4]}})"},
      {"fig4.8-xxz", "Fig. 4.8 caption: XXZ L = 5, Jxy = 1, Jzz = 1.1, impurity s_3^y, O = s_2^y + s_4^y, g in {0, 0.16, 0.94}",
       R"({"experiment": "tomo",
           "model": {"type": "xxz", "L": 5, "Jxy": 1.0, "Jzz": 1.1, "g": 0.0, "site": 3, "impurity_axis": "y"},
           "observable": "s2y+s4y", "steps": 1100, "stride": 50, "n_states": 80,
           "sweep": {"param": "g", "values": [0.0, 0.16, 0.94]}})"},
      {"fig5.2-perturb", "Fig. 5.2 caption: j = 10, alpha = 1.4, delta_lambda = 0.01, 100 Haar random states; lambda values are artifact defaults",
       R"({"experiment": "perturb",
           "model": {"type": "kicked-top", "j": 10, "alpha": 1.4},
           "observable": "random-J_x", "steps": 200, "stride": 5, "n_states": 100, "delta_lambda": 0.01,
           "sweep": {"param": "lambda", "values": [0.5, 2.5, 7.0]}})"},
      {"fig5.3-perturbed-basis", "Fig. 5.3 caption: zero shot noise, ordered perturbed basis from a fractional power of a random unitary; j and eta values are artifact defaults",
       R"({"experiment": "ordered-bloch",
           "model": {"type": "kicked-top", "j": 5, "alpha": 1.4},
           "n_states": 10, "stride": 5,
           "sweep": {"param": "eta", "values": [0.0, 0.01, 0.05, 0.1]}})"},
      {"fig5.4-delta-sweep", "Fig. 5.4 caption: j = 10, alpha = 1.4, lambda = 7.0; delta_lambda values are artifact defaults",
       R"({"experiment": "perturb",
           "model": {"type": "kicked-top", "j": 10, "lambda": 7.0, "alpha": 1.4},
           "observable": "random-J_x", "steps": 200, "stride": 5, "n_states": 100, "include_ideal": false,
           "sweep": {"param": "delta_lambda", "values": [0.001, 0.01, 0.05, 0.1]}})"},
  };
}

}  // namespace

const std::vector<Preset>& list_presets() {
  static const std::vector<Preset> presets = make_presets();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : list_presets())
    if (p.name == name) return p;
  std::string names;
  for (const auto& p : list_presets()) names += (names.empty() ? "" : ", ") + p.name;
  throw Error(ErrorCode::kInvalidConfig, "unknown preset '" + name + "'; known: " + names);
}

}  // namespace cmt
