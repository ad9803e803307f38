#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmnews/csv.hpp"
#include "swarmnews/dates.hpp"
#include "swarmnews/rng.hpp"

namespace swarmnews {

enum class Label : std::uint8_t { fake = 1, real = 0 };

inline const char* to_string(Label l) { return l == Label::fake ? "fake" : "real"; }

struct NewsArticle {
    std::int64_t id = 0;
    std::string title;
    std::string body;
    std::string subject;
    std::optional<Date> published;
    Label label = Label::real;
};

struct LoadStats {
    std::size_t rows_parsed = 0;
    std::size_t rows_malformed = 0;
    std::size_t dates_unparsed = 0;
};

struct ScrubStats {
    std::size_t tags_removed = 0;
    std::size_t articles_dropped_empty = 0;
};

struct Provenance {
    std::string fake_path;
    std::string real_path;
    LoadStats fake_stats;
    LoadStats real_stats;
    ScrubStats scrub;
    bool scrubbed = false;
};

struct Corpus {
    std::vector<NewsArticle> articles;
    Provenance provenance;

    std::size_t size() const { return articles.size(); }

    std::size_t count(Label l) const {
        std::size_t n = 0;
        for (const auto& a : articles) n += a.label == l;
        return n;
    }

    // Article count per publication month, dateless articles excluded.
    std::map<YearMonth, std::size_t> month_census() const {
        std::map<YearMonth, std::size_t> census;
        for (const auto& a : articles)
            if (a.published) ++census[year_month(*a.published)];
        return census;
    }
};

struct SplitSpec {
    enum class Mode { random, monthly };
    Mode mode = Mode::random;
    double train_ratio = 0.70;
    std::uint64_t seed = 0;
    int month_index = 1;                       // monthly mode only, 1-based
    std::size_t min_articles_per_month = 200;  // month usability threshold
};

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string lower_ascii(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(lower(c));
    return out;
}

inline void strip_bom(std::string& s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF)
        s.erase(0, 3);
}

inline void load_one_file(const std::string& path, Label label, std::int64_t& next_id,
                          std::vector<NewsArticle>& out, LoadStats& stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file: " + path);

    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.read_record(fields)) throw CorpusError("empty corpus file: " + path);

    strip_bom(fields[0]);
    const std::vector<std::string> expected = {"title", "text", "subject", "date"};
    if (fields.size() != expected.size())
        throw CorpusError("header mismatch in " + path + ": expected title,text,subject,date");
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (lower_ascii(trim(fields[i])) != expected[i])
            throw CorpusError("header mismatch in " + path + ": expected title,text,subject,date");

    while (reader.read_record(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != 4) {
            ++stats.rows_malformed;
            continue;
        }
        NewsArticle a;
        a.id = next_id++;
        a.title = fields[0];
        a.body = fields[1];
        a.subject = fields[2];
        a.published = parse_article_date(fields[3]);
        if (!a.published) ++stats.dates_unparsed;
        a.label = label;
        out.push_back(std::move(a));
        ++stats.rows_parsed;
    }
    if (stats.rows_parsed == 0) throw CorpusError("zero parsable rows in " + path);
}

// Leading source tag: optional upper-case location, "(Agency)", then a dash.
// Returns the byte length of the tag, or 0 when the body does not start with one.
inline std::size_t leading_source_tag(std::string_view body) {
    constexpr std::size_t kMaxLocation = 64;
    constexpr std::size_t kMaxAgency = 48;

    std::size_t i = 0;
    // Optional location: upper-case words, possibly slash/comma separated,
    // e.g. "WASHINGTON", "NEW YORK", "ST. LOUIS", "WASHINGTON/LONDON".
    bool saw_upper = false;
    while (i < body.size() && i < kMaxLocation) {
        const char c = body[i];
        if (c >= 'A' && c <= 'Z') {
            saw_upper = true;
            ++i;
        } else if ((c == ' ' || c == ',' || c == '.' || c == '/' || c == '-' || c == '\'' ||
                    (c >= '0' && c <= '9')) &&
                   saw_upper) {
            ++i;
        } else {
            break;
        }
    }
    if (!saw_upper) i = 0;  // no location part

    if (i >= body.size() || body[i] != '(') return 0;
    const std::size_t open = i;
    std::size_t close = body.find(')', open + 1);
    if (close == std::string_view::npos || close - open - 1 == 0 || close - open - 1 > kMaxAgency)
        return 0;
    bool agency_letter = false;
    for (std::size_t j = open + 1; j < close; ++j) {
        const char c = body[j];
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) agency_letter = true;
        if (c == '(' || c == '\n') return 0;
    }
    if (!agency_letter) return 0;

    std::size_t k = close + 1;
    while (k < body.size() && body[k] == ' ') ++k;
    // ASCII hyphen or UTF-8 en/em dash.
    if (k < body.size() && body[k] == '-') {
        ++k;
    } else if (k + 2 < body.size() && static_cast<unsigned char>(body[k]) == 0xE2 &&
               static_cast<unsigned char>(body[k + 1]) == 0x80 &&
               (static_cast<unsigned char>(body[k + 2]) == 0x93 ||
                static_cast<unsigned char>(body[k + 2]) == 0x94)) {
        k += 3;
    } else {
        return 0;
    }
    while (k < body.size() && body[k] == ' ') ++k;
    return k;
}

}  // namespace detail

// Strips leading "CITY (Agency) - " / "(Agency) - " tags from a body.
// Runs to a fixpoint so the operation is idempotent.
inline std::string scrub_body(std::string_view body, std::size_t* tags_removed = nullptr) {
    std::size_t removed = 0;
    std::string_view rest = body;
    while (true) {
        const std::size_t tag = detail::leading_source_tag(rest);
        if (tag == 0) break;
        rest.remove_prefix(tag);
        ++removed;
    }
    if (tags_removed) *tags_removed += removed;
    return std::string(rest);
}

inline NewsArticle scrub_sources(const NewsArticle& article) {
    NewsArticle out = article;
    out.body = scrub_body(article.body);
    return out;
}

// Scrubs every article and drops the ones whose bodies come out empty
// (after whitespace), recording the counts in provenance.
inline Corpus scrub_corpus(const Corpus& corpus) {
    Corpus out;
    out.provenance = corpus.provenance;
    out.articles.reserve(corpus.articles.size());
    for (const auto& a : corpus.articles) {
        NewsArticle s = a;
        s.body = scrub_body(a.body, &out.provenance.scrub.tags_removed);
        if (detail::trim(s.body).empty()) {
            ++out.provenance.scrub.articles_dropped_empty;
            continue;
        }
        out.articles.push_back(std::move(s));
    }
    out.provenance.scrubbed = true;
    return out;
}

inline Corpus load_corpus(const std::string& fake_path, const std::string& real_path) {
    Corpus corpus;
    corpus.provenance.fake_path = fake_path;
    corpus.provenance.real_path = real_path;
    std::int64_t next_id = 0;
    detail::load_one_file(fake_path, Label::fake, next_id, corpus.articles,
                          corpus.provenance.fake_stats);
    detail::load_one_file(real_path, Label::real, next_id, corpus.articles,
                          corpus.provenance.real_stats);
    return corpus;
}

inline std::pair<Corpus, Corpus> split_random(const Corpus& corpus, const SplitSpec& spec) {
    if (spec.mode != SplitSpec::Mode::random) throw CorpusError("split_random: wrong split mode");
    if (!(spec.train_ratio > 0.0 && spec.train_ratio < 1.0))
        throw CorpusError("split_random: train_ratio must be in (0,1)");

    const std::size_t n = corpus.articles.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(spec.seed);
    rng.shuffle(order);

    const auto n_train = static_cast<std::size_t>(std::llround(spec.train_ratio * static_cast<double>(n)));
    std::vector<bool> in_train(n, false);
    for (std::size_t i = 0; i < n_train && i < n; ++i) in_train[order[i]] = true;

    Corpus train, test;
    train.provenance = corpus.provenance;
    test.provenance = corpus.provenance;
    for (std::size_t i = 0; i < n; ++i)
        (in_train[i] ? train : test).articles.push_back(corpus.articles[i]);
    return {std::move(train), std::move(test)};
}

struct MonthCensusEntry {
    YearMonth month;
    std::size_t count = 0;
    bool usable = false;  // part of the selected contiguous run
};

// The usable months are the longest run of consecutive calendar months in
// which every month holds at least min_articles articles (earliest run on
// ties). Dateless articles never participate in monthly splits.
inline std::vector<MonthCensusEntry> usable_months(const Corpus& corpus,
                                                   std::size_t min_articles) {
    std::vector<MonthCensusEntry> census;
    for (const auto& [ym, count] : corpus.month_census())
        census.push_back({ym, count, false});

    std::size_t best_start = 0, best_len = 0;
    std::size_t run_start = 0, run_len = 0;
    for (std::size_t i = 0; i < census.size(); ++i) {
        const bool dense = census[i].count >= min_articles;
        const bool contiguous =
            run_len > 0 && census[i - 1].month.next() == census[i].month;
        if (dense && (run_len == 0 || contiguous)) {
            if (run_len == 0) run_start = i;
            ++run_len;
        } else if (dense) {
            run_start = i;
            run_len = 1;
        } else {
            run_len = 0;
        }
        if (run_len > best_len) {
            best_len = run_len;
            best_start = run_start;
        }
    }
    for (std::size_t i = best_start; i < best_start + best_len; ++i) census[i].usable = true;
    return census;
}

inline std::pair<Corpus, Corpus> split_monthly(const Corpus& corpus, const SplitSpec& spec) {
    if (spec.mode != SplitSpec::Mode::monthly)
        throw CorpusError("split_monthly: wrong split mode");
    if (spec.month_index < 1) throw CorpusError("split_monthly: month_index must be >= 1");

    const auto census = usable_months(corpus, spec.min_articles_per_month);
    std::vector<YearMonth> run;
    for (const auto& e : census)
        if (e.usable) run.push_back(e.month);

    const auto m = static_cast<std::size_t>(spec.month_index);
    if (run.size() < m + 1)
        throw CorpusError("split_monthly: need at least " + std::to_string(m + 1) +
                          " usable months, found " + std::to_string(run.size()));

    const YearMonth first = run.front();
    const YearMonth last_train = run[m - 1];
    const YearMonth test_month = run[m];

    Corpus train, test;
    train.provenance = corpus.provenance;
    test.provenance = corpus.provenance;
    for (const auto& a : corpus.articles) {
        if (!a.published) continue;
        const YearMonth ym = year_month(*a.published);
        if (ym >= first && ym <= last_train)
            train.articles.push_back(a);
        else if (ym == test_month)
            test.articles.push_back(a);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace swarmnews
