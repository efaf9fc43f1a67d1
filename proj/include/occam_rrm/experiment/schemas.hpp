#pragma once

// Copies of the files in schemas/; a test keeps them in sync.

#include <string_view>

namespace occam_rrm::schemas {

inline constexpr std::string_view experiment = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "occam-rrm experiment config",
  "type": "object",
  "required": ["env", "solvers", "horizon", "seeds"],
  "additionalProperties": false,
  "properties": {
    "name": {"type": "string"},
    "description": {"type": "string"},
    "env": {
      "type": "object",
      "required": ["env"],
      "properties": {
        "env": {"enum": ["single_state", "link_adapt", "power", "beamforming", "scheduling", "energy", "handover", "admission"]}
      }
    },
    "solvers": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "required": ["name", "type"],
        "properties": {
          "name": {"type": "string"},
          "type": {"type": "string"}
        }
      }
    },
    "horizon": {"type": "integer", "minimum": 1},
    "n_episodes": {"type": "integer", "minimum": 1},
    "seeds": {
      "oneOf": [
        {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
        {
          "type": "object",
          "required": ["base", "count"],
          "additionalProperties": false,
          "properties": {
            "base": {"type": "integer", "minimum": 0},
            "count": {"type": "integer", "minimum": 1}
          }
        }
      ]
    },
    "outputs": {"type": "string"},
    "metrics": {"enum": ["reward", "throughput", "beam"]},
    "discount": {"type": "number", "minimum": 0, "maximum": 0.999999},
    "record_field": {"type": "boolean"}
  }
})json";

inline constexpr std::string_view summary = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "occam-rrm experiment summary",
  "type": "object",
  "required": ["name", "version", "env", "horizon", "n_episodes", "seeds", "metrics_profile", "discount", "solvers", "series"],
  "additionalProperties": false,
  "$defs": {
    "metrics": {
      "type": "object",
      "required": ["mean_reward", "discounted_return"],
      "additionalProperties": false,
      "properties": {
        "mean_reward": {"type": "number"},
        "discounted_return": {"type": "number"},
        "sum_log_throughput": {"type": "number"},
        "accuracy": {"type": "number", "minimum": 0, "maximum": 1},
        "mean_abs_beam_error": {"type": "number", "minimum": 0}
      }
    }
  },
  "properties": {
    "name": {"type": "string"},
    "version": {"type": "string"},
    "env": {"type": "object"},
    "horizon": {"type": "integer", "minimum": 1},
    "n_episodes": {"type": "integer", "minimum": 1},
    "seeds": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
    "metrics_profile": {"enum": ["reward", "throughput", "beam"]},
    "discount": {"type": "number"},
    "solvers": {
      "type": "object",
      "additionalProperties": {
        "type": "object",
        "required": ["config", "metrics", "per_seed", "reward_curve", "episode_files"],
        "additionalProperties": false,
        "properties": {
          "config": {"type": "object"},
          "metrics": {"$ref": "#/$defs/metrics"},
          "per_seed": {
            "type": "array",
            "items": {
              "type": "object",
              "required": ["seed", "metrics"],
              "additionalProperties": false,
              "properties": {
                "seed": {"type": "integer", "minimum": 0},
                "metrics": {"$ref": "#/$defs/metrics"}
              }
            }
          },
          "reward_curve": {"type": "array", "items": {"type": "number"}},
          "episode_files": {"type": "array", "items": {"type": "string"}}
        }
      }
    },
    "series": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "rsrp_field": {
          "type": "object",
          "required": ["n_beams", "n_steps", "seed", "values", "optimal_beam"],
          "additionalProperties": false,
          "properties": {
            "n_beams": {"type": "integer", "minimum": 1},
            "n_steps": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0},
            "values": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
            "optimal_beam": {"type": "array", "items": {"type": "integer", "minimum": 0}}
          }
        }
      }
    }
  }
})json";

inline constexpr std::string_view sweep_summary = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "occam-rrm sweep summary",
  "type": "object",
  "required": ["name", "version", "parameters", "rows"],
  "additionalProperties": false,
  "properties": {
    "name": {"type": "string"},
    "version": {"type": "string"},
    "parameters": {"type": "array", "minItems": 1, "items": {"type": "string"}},
    "rows": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["point", "values", "solver", "metrics", "run_dir"],
        "additionalProperties": false,
        "properties": {
          "point": {"type": "integer", "minimum": 0},
          "values": {"type": "array"},
          "solver": {"type": "string"},
          "run_dir": {"type": "string"},
          "metrics": {
            "type": "object",
            "required": ["mean_reward", "discounted_return"],
            "additionalProperties": false,
            "properties": {
              "mean_reward": {"type": "number"},
              "discounted_return": {"type": "number"},
              "sum_log_throughput": {"type": "number"},
              "accuracy": {"type": "number", "minimum": 0, "maximum": 1},
              "mean_abs_beam_error": {"type": "number", "minimum": 0}
            }
          }
        }
      }
    }
  }
})json";

} // namespace occam_rrm::schemas
