#pragma once

// Configurable passive-voice heuristics. The JSON file may override any subset of
// the fields below; missing fields keep their defaults.
//
// {
//   "bfn":   { "participle_tags": [...], "auxiliaries": [...], "auxiliary_tags": [...],
//              "window": 3, "agent_preposition": "by", "prepositional_tags": [...] },
//   "swefn": { "passive_msd_markers": [...], "participle_msd_prefix": "PC.PRF",
//              "passive_auxiliaries": [...], "agent_preposition": "av", "agent_deprel": "AG" }
// }

#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fngram/types.hpp"

namespace fngram {

struct BfnVoiceRules {
  std::set<std::string> participle_tags{"VVN", "VBN", "VDN", "VHN"};
  std::set<std::string> auxiliaries{"be",   "am",     "is",  "are",  "was",    "were",
                                    "been", "being",  "'s",  "'re",  "get",    "gets",
                                    "got",  "gotten", "getting"};
  // BNC C5 tags for forms of "be".
  std::set<std::string> auxiliary_tags{"VBB", "VBD", "VBZ", "VBG", "VBI"};
  int window = 3;
  std::string agent_preposition = "by";
  std::set<std::string> prepositional_tags{"PRP", "PRF", "IN", "TO"};
};

struct SwefnVoiceRules {
  std::set<std::string> passive_msd_markers{"SFO"};
  std::string participle_msd_prefix = "PC.PRF";
  std::set<std::string> passive_auxiliaries{"bli",  "blir", "blev",  "blivit", "bliva",
                                            "vara", "är",   "var",   "varit",  "blitt"};
  std::string agent_preposition = "av";
  std::string agent_deprel = "AG";
};

struct VoiceRules {
  BfnVoiceRules bfn;
  SwefnVoiceRules swefn;
};

inline VoiceRules load_voice_rules(std::string_view source) {
  VoiceRules rules;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(source);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("voice rules: ") + e.what());
  }
  auto set_of = [](const nlohmann::json& o, const char* key, std::set<std::string>& into) {
    if (o.contains(key)) into = o.at(key).get<std::set<std::string>>();
  };
  try {
    if (j.contains("bfn")) {
      const auto& b = j.at("bfn");
      set_of(b, "participle_tags", rules.bfn.participle_tags);
      set_of(b, "auxiliaries", rules.bfn.auxiliaries);
      set_of(b, "auxiliary_tags", rules.bfn.auxiliary_tags);
      set_of(b, "prepositional_tags", rules.bfn.prepositional_tags);
      if (b.contains("window")) rules.bfn.window = b.at("window").get<int>();
      if (b.contains("agent_preposition")) rules.bfn.agent_preposition = b.at("agent_preposition").get<std::string>();
    }
    if (j.contains("swefn")) {
      const auto& s = j.at("swefn");
      set_of(s, "passive_msd_markers", rules.swefn.passive_msd_markers);
      set_of(s, "passive_auxiliaries", rules.swefn.passive_auxiliaries);
      if (s.contains("participle_msd_prefix"))
        rules.swefn.participle_msd_prefix = s.at("participle_msd_prefix").get<std::string>();
      if (s.contains("agent_preposition")) rules.swefn.agent_preposition = s.at("agent_preposition").get<std::string>();
      if (s.contains("agent_deprel")) rules.swefn.agent_deprel = s.at("agent_deprel").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("voice rules: ") + e.what());
  }
  return rules;
}

}  // namespace fngram
