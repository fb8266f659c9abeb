#include "nl2gql/align.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "nl2gql/errors.hpp"

namespace nl2gql::align {

std::string candidate_kind_name(CandidateKind k) {
  switch (k) {
    case CandidateKind::NodeVid: return "node_vid";
    case CandidateKind::AttrValue: return "attr_value";
    case CandidateKind::TagName: return "tag_name";
    case CandidateKind::EdgeName: return "edge_name";
  }
  return "?";
}

namespace {

std::vector<char32_t> decode_utf8(const std::string& s) {
  std::vector<char32_t> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    char32_t cp = 0;
    int extra = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1f;
      extra = 1;
    } else if ((c >> 4) == 0xe) {
      cp = c & 0x0f;
      extra = 2;
    } else if ((c >> 3) == 0x1e) {
      cp = c & 0x07;
      extra = 3;
    } else {
      // Invalid lead byte: treat as a single scalar to stay total.
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(extra) >= s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = s[i + k];
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3f);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

char32_t fold(char32_t c) {
  if (c < 128) return static_cast<char32_t>(std::tolower(static_cast<int>(c)));
  return c;
}

std::vector<char32_t> decode_folded(const std::string& s) {
  auto cps = decode_utf8(s);
  for (auto& c : cps) c = fold(c);
  return cps;
}

std::size_t levenshtein_cp(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

std::size_t levenshtein(const std::string& a, const std::string& b) {
  return levenshtein_cp(decode_utf8(a), decode_utf8(b));
}

double char_score(const std::string& q, const std::string& item) {
  if (q.empty() || item.empty()) throw EmptyInput("char_score: empty operand");
  auto qa = decode_folded(q);
  auto ia = decode_folded(item);
  double min_len = static_cast<double>(std::min(qa.size(), ia.size()));
  std::size_t dist = levenshtein_cp(qa, ia);
  if (dist == 0) return 2.0 * min_len;
  return min_len / static_cast<double>(dist);
}

double cosine(const backends::EmbeddingVector& u, const backends::EmbeddingVector& v) {
  if (u.dim() != v.dim()) throw DimMismatch("cosine: dims differ");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    dot += u.values[i] * v.values[i];
    nu += u.values[i] * u.values[i];
    nv += v.values[i] * v.values[i];
  }
  if (nu == 0 || nv == 0) return 0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<CandidateItem> build_index(const graph::GraphStore& store) {
  std::vector<CandidateItem> out;
  for (const auto& [vid, node] : store.nodes()) {
    out.push_back({vid, CandidateKind::NodeVid, vid});
    std::set<std::string> seen;  // dedup identical values within one node
    for (const auto& [attr, value] : node.attrs) {
      if (const auto* s = std::get_if<std::string>(&value)) {
        if (!s->empty() && seen.insert(*s).second)
          out.push_back({*s, CandidateKind::AttrValue, vid + "." + attr});
      }
    }
  }
  for (const auto& tag : store.schema().tags)
    out.push_back({tag.name, CandidateKind::TagName, tag.name});
  for (const auto& edge : store.schema().edges)
    out.push_back({edge.name, CandidateKind::EdgeName, edge.name});
  return out;
}

namespace {

struct Span {
  std::size_t start, end;  // character offsets
  std::string text;
};

std::vector<Span> enumerate_spans(const std::string& query, int max_tokens) {
  struct Tok {
    std::size_t start, end;
  };
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < query.size()) {
    while (i < query.size() && std::isspace(static_cast<unsigned char>(query[i]))) ++i;
    if (i >= query.size()) break;
    std::size_t start = i;
    while (i < query.size() && !std::isspace(static_cast<unsigned char>(query[i]))) ++i;
    toks.push_back({start, i});
  }
  std::vector<Span> spans;
  for (std::size_t a = 0; a < toks.size(); ++a) {
    for (int len = 1; len <= max_tokens && a + len <= toks.size(); ++len) {
      std::size_t s = toks[a].start, e = toks[a + len - 1].end;
      std::string text = query.substr(s, e - s);
      // Strip surrounding punctuation so "Duncan?" matches "Duncan".
      std::size_t b = 0, t = text.size();
      while (b < t && std::ispunct(static_cast<unsigned char>(text[b])) && text[b] != '$')
        ++b;
      while (t > b && std::ispunct(static_cast<unsigned char>(text[t - 1]))) --t;
      if (t <= b) continue;
      spans.push_back({s + b, s + t, text.substr(b, t - b)});
    }
  }
  return spans;
}

bool candidate_tie_less(const CandidateItem& a, const CandidateItem& b) {
  if (a.surface.size() != b.surface.size()) return a.surface.size() < b.surface.size();
  if (a.surface != b.surface) return a.surface < b.surface;
  return candidate_kind_name(a.kind) < candidate_kind_name(b.kind);
}

}  // namespace

std::vector<AlignmentMatch> retrieve(const std::string& query,
                                     const std::vector<CandidateItem>& index,
                                     backends::EmbedBackend& embed_backend,
                                     const RetrieveParams& params) {
  if (index.empty()) throw EmptyInput("retrieve: empty candidate index");
  if (params.tau1 <= 0 || params.k <= 0 || params.span_ngrams <= 0)
    throw Error("retrieve: params must be positive");

  auto spans = enumerate_spans(query, params.span_ngrams);

  // Stage 1: character-level filter.
  struct Survivor {
    std::size_t span_idx;
    std::size_t cand_idx;
    double u1;
  };
  std::vector<Survivor> survivors;
  for (std::size_t si = 0; si < spans.size(); ++si) {
    for (std::size_t ci = 0; ci < index.size(); ++ci) {
      double u1 = char_score(spans[si].text, index[ci].surface);
      if (u1 >= params.tau1) survivors.push_back({si, ci, u1});
    }
  }

  auto embed_pair = [&](const std::vector<std::string>& texts) {
    // Deduplicated batch embed; returns per-text vectors.
    std::vector<std::string> unique;
    std::map<std::string, std::size_t> pos;
    for (const auto& t : texts)
      if (pos.emplace(t, unique.size()).second) unique.push_back(t);
    auto vecs = embed_backend.embed(unique);
    std::vector<backends::EmbeddingVector> out;
    for (const auto& t : texts) out.push_back(vecs[pos[t]]);
    return out;
  };

  std::vector<AlignmentMatch> result;

  if (survivors.empty()) {
    // Fallback: rank every candidate against the whole query.
    std::vector<std::string> texts{query};
    for (const auto& c : index) texts.push_back(c.surface);
    auto vecs = embed_pair(texts);
    std::vector<AlignmentMatch> ranked;
    for (std::size_t ci = 0; ci < index.size(); ++ci) {
      AlignmentMatch m;
      m.span_start = 0;
      m.span_end = query.size();
      m.candidate = index[ci];
      m.u1 = 0;
      m.u2 = cosine(vecs[0], vecs[ci + 1]);
      m.stage = MatchStage::Fallback;
      ranked.push_back(std::move(m));
    }
    std::sort(ranked.begin(), ranked.end(), [](const AlignmentMatch& a, const AlignmentMatch& b) {
      if (a.u2 != b.u2) return a.u2 > b.u2;
      return candidate_tie_less(a.candidate, b.candidate);
    });
    if (ranked.size() > static_cast<std::size_t>(params.k))
      ranked.resize(static_cast<std::size_t>(params.k));
    return ranked;
  }

  // Stage 2: semantic ranking of survivors.
  std::vector<std::string> texts;
  for (const auto& s : survivors) {
    texts.push_back(spans[s.span_idx].text);
    texts.push_back(index[s.cand_idx].surface);
  }
  auto vecs = embed_pair(texts);

  std::vector<AlignmentMatch> all;
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    const auto& s = survivors[i];
    AlignmentMatch m;
    m.span_start = spans[s.span_idx].start;
    m.span_end = spans[s.span_idx].end;
    m.candidate = index[s.cand_idx];
    m.u1 = s.u1;
    m.u2 = cosine(vecs[2 * i], vecs[2 * i + 1]);
    // Exact (case-folded) character match is certain without semantics.
    bool exact = decode_folded(spans[s.span_idx].text) == decode_folded(m.candidate.surface);
    m.stage = exact ? MatchStage::Character : MatchStage::Semantic;
    all.push_back(std::move(m));
  }

  // Global greedy: best u2 first, at most one match per candidate,
  // at most k per span.
  std::sort(all.begin(), all.end(), [](const AlignmentMatch& a, const AlignmentMatch& b) {
    if (a.u2 != b.u2) return a.u2 > b.u2;
    if (a.u1 != b.u1) return a.u1 > b.u1;
    if (candidate_tie_less(a.candidate, b.candidate)) return true;
    if (candidate_tie_less(b.candidate, a.candidate)) return false;
    if (a.span_start != b.span_start) return a.span_start < b.span_start;
    return a.span_end < b.span_end;
  });
  std::set<std::pair<std::string, std::string>> used_candidates;
  std::map<std::pair<std::size_t, std::size_t>, int> per_span;
  for (auto& m : all) {
    auto cand_key = std::make_pair(candidate_kind_name(m.candidate.kind), m.candidate.locator);
    auto span_key = std::make_pair(m.span_start, m.span_end);
    if (used_candidates.count(cand_key)) continue;
    if (per_span[span_key] >= params.k) continue;
    used_candidates.insert(cand_key);
    ++per_span[span_key];
    result.push_back(std::move(m));
  }
  std::sort(result.begin(), result.end(), [](const AlignmentMatch& a, const AlignmentMatch& b) {
    if (a.span_start != b.span_start) return a.span_start < b.span_start;
    if (a.span_end != b.span_end) return a.span_end < b.span_end;
    if (a.u2 != b.u2) return a.u2 > b.u2;
    return candidate_tie_less(a.candidate, b.candidate);
  });
  return result;
}

namespace {

std::string hint_text(const CandidateItem& c) {
  return " (" + candidate_kind_name(c.kind) + ": " + c.locator + ")";
}

}  // namespace

RewriteResult rewrite(const std::string& query, const std::vector<AlignmentMatch>& matches,
                      const graph::GraphSchema& schema) {
  (void)schema;
  RewriteResult out;

  // Greedy non-overlapping selection by descending (u1, u2).
  std::vector<const AlignmentMatch*> order;
  for (const auto& m : matches)
    if (m.span_end > m.span_start && m.span_end <= query.size()) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](const AlignmentMatch* a, const AlignmentMatch* b) {
    if (a->u1 != b->u1) return a->u1 > b->u1;
    if (a->u2 != b->u2) return a->u2 > b->u2;
    return a->span_start < b->span_start;
  });
  std::vector<const AlignmentMatch*> accepted;
  for (const auto* m : order) {
    bool overlaps = false;
    for (const auto* a : accepted) {
      if (m->span_start < a->span_end && a->span_start < m->span_end) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) accepted.push_back(m);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const AlignmentMatch* a, const AlignmentMatch* b) {
              return a->span_start < b->span_start;
            });

  std::string rewritten;
  std::size_t cursor = 0;
  for (const auto* m : accepted) {
    std::string original = query.substr(m->span_start, m->span_end - m->span_start);
    std::string hint = hint_text(m->candidate);
    // Already canonical and already hinted: leave untouched (idempotence).
    if (original == m->candidate.surface &&
        query.compare(m->span_end, hint.size(), hint) == 0) {
      continue;
    }
    rewritten += query.substr(cursor, m->span_start - cursor);
    rewritten += m->candidate.surface + hint;
    cursor = m->span_end;
    out.substitutions.push_back({original, m->candidate.surface, m->candidate.kind});
  }
  rewritten += query.substr(cursor);
  out.rewritten_query = std::move(rewritten);

  // Entity-like spans (capitalized, mid-sentence, or quoted) that no match covers.
  auto covered = [&](std::size_t s, std::size_t e) {
    for (const auto& m : matches)
      if (s < m.span_end && m.span_start < e) return true;
    return false;
  };
  std::size_t i = 0;
  bool sentence_start = true;
  while (i < query.size()) {
    if (std::isspace(static_cast<unsigned char>(query[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < query.size() && !std::isspace(static_cast<unsigned char>(query[i]))) ++i;
    std::string tok = query.substr(start, i - start);
    bool entity_like =
        (!sentence_start && std::isupper(static_cast<unsigned char>(tok[0]))) ||
        tok.front() == '"' || tok.front() == '\'';
    if (entity_like && !covered(start, start + tok.size())) out.unmatched.push_back(tok);
    sentence_start = tok.back() == '.' || tok.back() == '?' || tok.back() == '!';
  }
  return out;
}

}  // namespace nl2gql::align
