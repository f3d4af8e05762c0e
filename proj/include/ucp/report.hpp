#pragma once

// Text-table and CSV rendering for estimates, the adjusted-weight table,
// evaluation reports and corpus summaries. Numbers print with two decimals.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ucp/corpus.hpp"
#include "ucp/evaluation.hpp"
#include "ucp/fuzzy.hpp"
#include "ucp/karner.hpp"

namespace ucp::report {

enum class Format { table, csv };

inline std::string fixed(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

/// Whole percentage points with an explicit sign, e.g. "+22%".
inline std::string points(double pts) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.0f%%", pts);
    std::string s = buf;
    if (s == "-0%") s = "+0%";
    return s;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  // printed above a text table only

    std::string render(Format f) const {
        std::string out;
        if (f == Format::csv) {
            auto line = [&](const std::vector<std::string>& cells) {
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    if (i) out += ',';
                    out += csv_cell(cells[i]);
                }
                out += '\n';
            };
            line(header);
            for (const auto& r : rows) line(r);
            return out;
        }
        std::vector<std::size_t> width(header.size(), 0);
        for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
        for (const auto& r : rows)
            for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
        for (const auto& n : notes) out += "# " + n + "\n";
        auto line = [&](const std::vector<std::string>& cells) {
            std::string l;
            for (std::size_t c = 0; c < width.size(); ++c) {
                const std::string& cell = c < cells.size() ? cells[c] : std::string();
                if (c) l += "  ";
                if (c == 0) l += cell + std::string(width[c] - cell.size(), ' ');
                else l += std::string(width[c] - cell.size(), ' ') + cell;
            }
            while (!l.empty() && l.back() == ' ') l.pop_back();
            out += l + '\n';
        };
        line(header);
        std::size_t total = 0;
        for (auto w : width) total += w;
        out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
        for (const auto& r : rows) line(r);
        return out;
    }

private:
    static std::string csv_cell(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + '"';
    }
};

struct ProjectEstimate {
    std::string project_id;
    SizeEstimate estimate;
};

inline Table estimates_table(const std::vector<ProjectEstimate>& items) {
    Table t;
    t.header = {"project_id", "model", "uucp", "tf", "ef", "ucp", "rate_ph_per_ucp", "effort_ph"};
    for (const auto& [id, e] : items) {
        std::string rate = e.rate ? std::to_string(static_cast<int>(*e.rate)) : "risk";
        t.rows.push_back({id, std::string(to_string(e.model)), fixed(e.uucp), fixed(e.tf), fixed(e.ef), fixed(e.ucp),
                          rate, e.effort_ph ? fixed(*e.effort_ph) : ""});
    }
    return t;
}

inline Table fuzzy_weight_table(const AdjustedWeightTable& table) {
    Table t;
    t.header = {"transactions", "karner_weight", "adjusted_weight"};
    for (int level = 1; level <= kMaxTransactionLevel; ++level) {
        t.rows.push_back({std::to_string(level), fixed(karner_use_case_weight(level), 0), fixed(table.weight(level))});
    }
    return t;
}

/// One row per project plus mean, SD and improvement rows per group.
/// Error columns print estimate minus actual.
inline Table evaluation_table(const EvaluationReport& r) {
    Table t;
    t.notes.push_back("error columns are estimate - actual (UUCP); improvement is in percentage points vs " +
                      std::string(to_string(r.models.front())));
    t.header = {"group", "project_id", "actual"};
    const std::vector<std::string> blocks{"estimate_", "mre_", "mer_", "error_"};
    for (const auto& b : blocks)
        for (auto m : r.models) t.header.push_back(b + std::string(to_string(m)));
    const std::size_t k = r.models.size();
    auto blank_row = [&](const std::string& group, const std::string& label) {
        std::vector<std::string> row(3 + 4 * k);
        row[0] = group;
        row[1] = label;
        return row;
    };
    for (const auto& g : r.groups) {
        for (const auto& pr : g.rows) {
            auto row = blank_row(g.label, pr.project_id);
            row[2] = fixed(pr.actual);
            for (std::size_t i = 0; i < k; ++i) {
                const ObservationPair o{pr.project_id, pr.actual, pr.estimate(r.models[i])};
                row[3 + i] = fixed(o.predicted);
                row[3 + k + i] = fixed(mre(o));
                row[3 + 2 * k + i] = fixed(mer(o));
                row[3 + 3 * k + i] = fixed(display_error(signed_error(o)));
            }
            t.rows.push_back(std::move(row));
        }
        auto mean = blank_row(g.label, "mean");
        auto sd = blank_row(g.label, "sd");
        for (std::size_t i = 0; i < k; ++i) {
            const auto& s = g.summaries[i].summary;
            mean[3 + k + i] = fixed(s.mmre);
            mean[3 + 2 * k + i] = fixed(s.mmer);
            mean[3 + 3 * k + i] = fixed(display_error(s.mean_error));
            sd[3 + 3 * k + i] = s.sd ? fixed(*s.sd) : "n/a";
        }
        t.rows.push_back(std::move(mean));
        t.rows.push_back(std::move(sd));
        for (const auto& imp : g.improvements) {
            auto row = blank_row(g.label, "improvement");
            for (std::size_t i = 0; i < k; ++i) {
                if (r.models[i] != imp.candidate) continue;
                row[3 + k + i] = points(imp.value.mmre_points);
                row[3 + 2 * k + i] = points(imp.value.mmer_points);
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

inline Table project_summary_table(const Corpus& c) {
    Table t;
    t.header = {"project_id", "use_cases", "actors", "extend_include_ratio", "stage", "tf", "ef",
                "actual_size_uucp", "actual_effort_ph"};
    for (const auto& p : c.projects) {
        t.rows.push_back({p.id, std::to_string(p.use_cases.size()), std::to_string(p.actors.size()),
                          fixed(extend_include_ratio(p)), std::string(to_string(stage_of(p))),
                          fixed(technical_factor(p.factors)), fixed(environmental_factor(p.factors)),
                          p.actual_size_uucp ? fixed(*p.actual_size_uucp) : "",
                          p.actual_effort_ph ? fixed(*p.actual_effort_ph) : ""});
    }
    return t;
}

}  // namespace ucp::report
