#pragma once

// Synthetic BFN- and SweFN-layout corpora for throughput and property runs.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace synthetic {

inline constexpr const char* kCore[] = {"Agent", "Theme", "Goal", "Event"};
inline constexpr const char* kNonCore[] = {"Time", "Place"};

inline std::string frame_name(int i) { return "Frame_" + std::to_string(i); }

inline std::string frames_tsv(int frames) {
  std::ostringstream out;
  for (int f = 0; f < frames; ++f) {
    out << frame_name(f) << "\tcore\tAgent,Event,Goal,Theme\n";
    out << frame_name(f) << "\tnoncore\tPlace,Time\n";
  }
  return out.str();
}

namespace detail {

struct Builder {
  std::string text;
  std::string pos, fe, gf, pt;
  long target_start = 0, target_end = 0;

  long add_word(const std::string& w, const std::string& tag) {
    if (!text.empty()) text += ' ';
    const long start = static_cast<long>(text.size());
    text += w;
    pos += "     <label start=\"" + std::to_string(start) + "\" end=\"" +
           std::to_string(start + static_cast<long>(w.size()) - 1) + "\" name=\"" + tag + "\"/>\n";
    return start;
  }
  void add_fe(const std::string& name, long start, const std::string& g, const std::string& p) {
    const long end = static_cast<long>(text.size()) - 1;
    auto lab = [&](const std::string& n) {
      return "     <label start=\"" + std::to_string(start) + "\" end=\"" + std::to_string(end) + "\" name=\"" + n +
             "\"/>\n";
    };
    fe += lab(name);
    if (!g.empty()) gf += lab(g);
    pt += lab(p);
  }
};

}  // namespace detail

/// BFN lexUnit documents totalling `sentences` annotated sentences over `frames` frames.
inline std::string bfn_corpus(int sentences, int frames, unsigned seed) {
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<corpus>\n";
  const int per_lu = 50;
  for (int s = 0, lu = 0; s < sentences; ++lu) {
    const int frame = lu % frames;
    out << "<lexUnit name=\"verb" << lu % 97 << ".v\" ID=\"" << 10000 + lu << "\" frame=\"" << frame_name(frame)
        << "\" POS=\"V\">\n";
    for (int k = 0; k < per_lu && s < sentences; ++k, ++s) {
      detail::Builder b;
      const bool passive = pick(0, 9) == 0;
      const long subj = b.add_word("someone" + std::to_string(pick(0, 9)), "NP0");
      b.add_fe(passive ? "Theme" : "Agent", subj, "Ext", "NP");
      if (passive) b.add_word("was", "VBD");
      b.target_start = b.add_word("verbed", passive ? "VVN" : "VVB");
      b.target_end = static_cast<long>(b.text.size()) - 1;
      const int extras = pick(0, 3);
      for (int e = 0; e < extras; ++e) {
        switch (pick(0, 5)) {
          case 0: {
            const long st = b.add_word("something", "NN1");
            b.add_fe(passive ? "Agent" : "Theme", st, "Obj", "NP");
            break;
          }
          case 1: {
            const long st = b.add_word("to", "PRP");
            b.add_word("home", "NN1");
            b.add_fe("Goal", st, "Dep", "PP[to]");
            break;
          }
          case 2: {
            const long st = b.add_word("to", "TO0");
            b.add_word("go", "VVI");
            b.add_fe("Event", st, "Dep", "VPto");
            break;
          }
          case 3: {
            const long st = b.add_word("yesterday", "AV0");
            b.add_fe("Time", st, "Dep", "AVP");
            break;
          }
          case 4: {
            const long st = b.add_word("in", "PRP");
            b.add_word("town", "NN1");
            b.add_fe("Place", st, "Dep", "PP[in]");
            break;
          }
          default: {
            const long st = b.add_word("that", "CJT");
            b.add_word("it", "PNP");
            b.add_word("rains", "VVZ");
            b.add_fe("Event", st, "Dep", "Sfin");
            break;
          }
        }
      }
      b.add_word(".", "PUN");
      out << " <sentence ID=\"" << s + 1 << "\">\n  <text>" << b.text << "</text>\n";
      out << "  <annotationSet>\n   <layer rank=\"1\" name=\"BNC\">\n" << b.pos << "   </layer>\n  </annotationSet>\n";
      out << "  <annotationSet status=\"MANUAL\">\n";
      out << "   <layer rank=\"1\" name=\"FE\">\n" << b.fe << "   </layer>\n";
      out << "   <layer rank=\"1\" name=\"GF\">\n" << b.gf << "   </layer>\n";
      out << "   <layer rank=\"1\" name=\"PT\">\n" << b.pt << "   </layer>\n";
      out << "   <layer rank=\"1\" name=\"Target\">\n     <label start=\"" << b.target_start << "\" end=\""
          << b.target_end << "\" name=\"Target\"/>\n   </layer>\n";
      out << "  </annotationSet>\n </sentence>\n";
    }
    out << "</lexUnit>\n";
  }
  out << "</corpus>\n";
  return out.str();
}

/// SweFN-layout corpus with one LU per frame.
inline std::string swefn_corpus(int sentences, int frames, unsigned seed) {
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<corpus>\n";
  const int per_frame = std::max(1, sentences / frames);
  int s = 0;
  for (int f = 0; f < frames && s < sentences; ++f) {
    out << "<frame name=\"" << frame_name(f) << "\">\n<lu name=\"verba" << f % 31 << "..1\">\n";
    for (int k = 0; k < per_frame && s < sentences; ++k, ++s) {
      out << "<sentence id=\"sw" << s + 1 << "\">\n";
      out << " <element name=\"Agent\"><w pos=\"PN\" ref=\"1\" dephead=\"2\" deprel=\"SS\">hon</w></element>\n";
      out << " <element name=\"LU\"><w msd=\"VB.PRS.AKT\" ref=\"2\" deprel=\"ROOT\">verbar</w></element>\n";
      int ref = 3;
      const int extras = pick(0, 2);
      for (int e = 0; e < extras; ++e) {
        switch (pick(0, 2)) {
          case 0:
            out << " <element name=\"Theme\"><w pos=\"NN\" ref=\"" << ref++
                << "\" dephead=\"2\" deprel=\"OO\">saken</w></element>\n";
            break;
          case 1:
            out << " <element name=\"Goal\"><w pos=\"PP\" ref=\"" << ref
                << "\" dephead=\"2\" deprel=\"RA\">till</w><w pos=\"NN\" ref=\"" << ref + 1 << "\" dephead=\""
                << ref << "\" deprel=\"PA\">stan</w></element>\n";
            ref += 2;
            break;
          default:
            out << " <element name=\"Time\"><w pos=\"AB\" ref=\"" << ref++
                << "\" dephead=\"2\" deprel=\"TA\">igår</w></element>\n";
            break;
        }
      }
      out << " <w pos=\"MAD\" ref=\"" << ref << "\" dephead=\"2\" deprel=\"IP\">.</w>\n</sentence>\n";
    }
    out << "</lu>\n</frame>\n";
  }
  out << "</corpus>\n";
  return out.str();
}

/// Writes corpora, frame index and a pipeline config under `dir`; returns the config path.
inline std::filesystem::path write_workspace(const std::filesystem::path& dir, int bfn_sentences,
                                             int swefn_sentences, int frames) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream(dir / name, std::ios::binary) << content;
  };
  put("frames.tsv", frames_tsv(frames));
  put("bfn.xml", bfn_corpus(bfn_sentences, frames, 7));
  put("swefn.xml", swefn_corpus(swefn_sentences, frames, 11));
  put("pipeline.json", R"({
  "left": {"name": "BFN", "dialect": "bfn", "corpora": ["bfn.xml"], "frames": ["frames.tsv"]},
  "right": {"name": "SweFN", "dialect": "swefn", "corpora": ["swefn.xml"], "frames": ["frames.tsv"]},
  "comparisons": ["2.B:2.B", "3.B:2.B"],
  "levels": ["sem", "semsyn"],
  "modes": ["exact", "fuzzy"],
  "grammar": {"level": "semsyn", "mode": "fuzzy", "prune": true}
}
)");
  return dir / "pipeline.json";
}

}  // namespace synthetic
