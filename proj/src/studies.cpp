#include "sceptic/studies.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sceptic/calibrate.hpp"
#include "sceptic/core.hpp"
#include "sceptic/design.hpp"
#include "sceptic/numeric.hpp"

namespace sceptic {

namespace {

[[noreturn]] void parse_fail(int line, int column, const std::string& what) {
    std::ostringstream s;
    s << "line " << line << ", column " << column << ": " << what;
    throw std::invalid_argument(s.str());
}

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"' && cur.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) parse_fail(line_no, static_cast<int>(fields.size()) + 1, "unterminated quote");
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& text, int line, int column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        parse_fail(line, column, "cannot parse '" + text + "' as a number");
    }
    return value;
}

long parse_long(const std::string& text, int line, int column) {
    long value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        parse_fail(line, column, "cannot parse '" + text + "' as an integer");
    }
    return value;
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

const std::vector<std::string> kCorrelationHeader = {"study", "r_o", "n_o", "r_r", "n_r"};
const std::vector<std::string> kEffectHeader = {"study", "theta_o", "se_o", "theta_r", "se_r"};

void fill_derived(StudyRecord& rec) {
    rec.z_o = rec.theta_o / rec.se_o;
    rec.z_r = rec.theta_r / rec.se_r;
    rec.p_o = std_normal_sf(rec.z_o);
    rec.p_r = std_normal_sf(rec.z_r);
}

}  // namespace

std::vector<StudyRecord> load_studies(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open study file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty study file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_csv_line(line, 1);
    bool correlation_mode;
    if (header == kCorrelationHeader) {
        correlation_mode = true;
    } else if (header == kEffectHeader) {
        correlation_mode = false;
    } else {
        throw std::invalid_argument(
            "unrecognized header: expected 'study,r_o,n_o,r_r,n_r' or "
            "'study,theta_o,se_o,theta_r,se_r'");
    }

    std::vector<StudyRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto fields = split_csv_line(line, line_no);
        if (fields.size() != 5) {
            parse_fail(line_no, static_cast<int>(fields.size()),
                       "expected 5 fields, got " + std::to_string(fields.size()));
        }
        StudyRecord rec;
        rec.study_id = fields[0];
        if (correlation_mode) {
            rec.r_o = parse_double(fields[1], line_no, 2);
            rec.n_o = parse_long(fields[2], line_no, 3);
            rec.r_r = parse_double(fields[3], line_no, 4);
            rec.n_r = parse_long(fields[4], line_no, 5);
            if (!(std::fabs(rec.r_o) < 1.0)) parse_fail(line_no, 2, "correlation outside (-1, 1)");
            if (rec.n_o < 4) parse_fail(line_no, 3, "sample size below 4");
            if (!(std::fabs(rec.r_r) < 1.0)) parse_fail(line_no, 4, "correlation outside (-1, 1)");
            if (rec.n_r < 4) parse_fail(line_no, 5, "sample size below 4");
            rec.theta_o = std::atanh(rec.r_o);
            rec.theta_r = std::atanh(rec.r_r);
            rec.se_o = 1.0 / std::sqrt(static_cast<double>(rec.n_o - 3));
            rec.se_r = 1.0 / std::sqrt(static_cast<double>(rec.n_r - 3));
            rec.c = static_cast<double>(rec.n_r - 3) / static_cast<double>(rec.n_o - 3);
        } else {
            rec.from_theta_se = true;
            rec.theta_o = parse_double(fields[1], line_no, 2);
            rec.se_o = parse_double(fields[2], line_no, 3);
            rec.theta_r = parse_double(fields[3], line_no, 4);
            rec.se_r = parse_double(fields[4], line_no, 5);
            if (!(rec.se_o > 0.0)) parse_fail(line_no, 3, "standard error must be > 0");
            if (!(rec.se_r > 0.0)) parse_fail(line_no, 5, "standard error must be > 0");
            rec.c = (rec.se_o * rec.se_o) / (rec.se_r * rec.se_r);
        }
        fill_derived(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string serialize_studies(const std::vector<StudyRecord>& records) {
    bool effect_mode = !records.empty() && records.front().from_theta_se;
    std::ostringstream out;
    const auto& header = effect_mode ? kEffectHeader : kCorrelationHeader;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& rec : records) {
        std::string quoted = rec.study_id;
        std::size_t pos = 0;
        while ((pos = quoted.find('"', pos)) != std::string::npos) {
            quoted.insert(pos, 1, '"');
            pos += 2;
        }
        out << '"' << quoted << '"' << ',';
        if (effect_mode) {
            out << format_double(rec.theta_o) << ',' << format_double(rec.se_o) << ','
                << format_double(rec.theta_r) << ',' << format_double(rec.se_r);
        } else {
            out << format_double(rec.r_o) << ',' << rec.n_o << ',' << format_double(rec.r_r)
                << ',' << rec.n_r;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<AnalysisRow> analyze_studies(const std::vector<StudyRecord>& records,
                                         double alpha, double boundary_tol) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    std::vector<AnalysisRow> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        AnalysisRow row;
        row.record = rec;
        row.p_max = std::max(rec.p_o, rec.p_r);
        StudyPair pair;
        pair.z_o = rec.z_o;
        pair.z_r = rec.z_r;
        pair.c = rec.c;
        row.p_s_star = sceptical_pvalues(pair).p_s_star;
        row.success_2tr = rec.p_o <= alpha + boundary_tol && rec.p_r <= alpha + boundary_tol;
        row.success_sceptical = row.p_s_star <= alpha + boundary_tol;
        try {
            row.power_2tr = conditional_power(rec.z_o, rec.c, alpha, Method::TWO_TRIALS);
        } catch (const std::exception&) {
            row.power_2tr = std::numeric_limits<double>::quiet_NaN();
        }
        row.c_star = std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(row.power_2tr)) {
            try {
                DesignRequest req;
                req.z_o = rec.z_o;
                req.alpha = alpha;
                req.target_power = row.power_2tr;
                req.power_kind = PowerKind::CONDITIONAL;
                req.method = Method::SCEPTICAL_CONTROLLED;
                row.c_star = required_relative_sample_size(req).c_required;
                row.c_star_feasible = true;
            } catch (const std::exception&) {
                row.c_star_feasible = false;
            }
        }
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

std::string series_label(const std::string& prefix, double value) {
    std::ostringstream s;
    s << prefix << format_double(value);
    return s.str();
}

void figure_cdf(std::vector<FigureRow>& rows) {
    const double cs[] = {0.0, 0.5, 1.0, 2.0, 10.0};
    for (double c : cs) {
        std::string label = series_label("c=", c);
        for (int i = 0; i <= 120; ++i) {
            double y = 0.05 * i;
            rows.push_back({y, label, null_cdf(y, c)});
        }
    }
    for (double c : cs) {
        rows.push_back({c, "E(Y)", expected_zs2(c)});
    }
}

void figure_ps_vs_c(std::vector<FigureRow>& rows) {
    const double p_o = 0.027;
    const double prs[] = {0.0001, 0.005, 0.02, 0.027};
    double z_o = std_normal_isf(p_o);
    for (double p_r : prs) {
        std::string label = series_label("p_r=", p_r);
        double z_r = std_normal_isf(p_r);
        for (int i = -40; i <= 40; ++i) {
            double c = std::pow(10.0, 0.05 * i);
            StudyPair pair;
            pair.z_o = z_o;
            pair.z_r = z_r;
            pair.c = c;
            rows.push_back({c, label, sceptical_pvalues(pair).p_s_star});
        }
    }
}

void figure_regions(std::vector<FigureRow>& rows, double alpha) {
    auto log_grid = [](double lo, double hi, int n, int i) {
        return lo * std::pow(hi / lo, static_cast<double>(i) / n);
    };
    for (double c : {0.1, 1.0, 10.0}) {
        CalibrationResult cal = calibrate_gamma_c(alpha, c);
        std::string label = series_label("sceptical c=", c);
        for (int i = 0; i <= 200; ++i) {
            double p_o = log_grid(1e-6, cal.gamma_c * 0.999999, 200, i);
            rows.push_back({p_o, label, success_region_boundary(p_o, alpha, c)});
        }
    }
    for (int i = 0; i <= 200; ++i) {
        double p_o = log_grid(1e-6, alpha, 200, i);
        rows.push_back({p_o, "two_trials", alpha});
    }
    double fisher_q = chi2_quantile(1.0 - alpha * alpha, 4.0);
    double fisher_product = std::exp(-0.5 * fisher_q);
    for (int i = 0; i <= 200; ++i) {
        double p_o = log_grid(1e-6, 1.0 - 1e-9, 200, i);
        rows.push_back({p_o, "fisher", std::min(1.0, fisher_product / p_o)});
    }
    double stouffer_sum = std::sqrt(2.0) * std_normal_isf(alpha * alpha);
    for (int i = 0; i <= 200; ++i) {
        double p_o = log_grid(1e-6, 1.0 - 1e-9, 200, i);
        double z_o = std_normal_isf(p_o);
        rows.push_back({p_o, "stouffer", std_normal_sf(stouffer_sum - z_o)});
    }
    double pearson_q = chi2_quantile(alpha * alpha, 4.0);
    double pearson_product = std::exp(-0.5 * pearson_q);
    double pearson_cap = 1.0 - pearson_product;
    for (int i = 0; i <= 200; ++i) {
        double p_o = log_grid(1e-6, pearson_cap * 0.999999, 200, i);
        rows.push_back({p_o, "pearson", 1.0 - pearson_product / (1.0 - p_o)});
    }
}

void figure_power_ratios(std::vector<FigureRow>& rows, double alpha) {
    double za = std_normal_isf(alpha);
    for (int i = 1; i <= 50; ++i) {
        double p_o = 0.0005 * i;
        double z_o = std_normal_isf(p_o);
        double sceptical = conditional_power(z_o, 1.0, alpha, Method::SCEPTICAL_CONTROLLED);
        double both = conditional_power(z_o, 1.0, alpha, Method::TWO_TRIALS);
        rows.push_back({p_o, "power_ratio c=1", sceptical / both});
    }
    for (double target : {0.8, 0.9, 0.95}) {
        std::string label = series_label("size_ratio power=", target);
        double zp = std_normal_quantile(target);
        for (int i = 1; i <= 50; ++i) {
            double p_o = 0.0005 * i;
            double z_o = std_normal_isf(p_o);
            double root_c = (za + zp) / z_o;
            double c_2tr = root_c * root_c;
            DesignRequest req;
            req.z_o = z_o;
            req.alpha = alpha;
            req.target_power = target;
            req.power_kind = PowerKind::CONDITIONAL;
            req.method = Method::SCEPTICAL_CONTROLLED;
            double c_sceptical = required_relative_sample_size(req).c_required;
            rows.push_back({p_o, label, c_sceptical / c_2tr});
        }
    }
}

void figure_project_power(std::vector<FigureRow>& rows, double alpha) {
    for (double original_power : {0.8, 0.9}) {
        for (Method method : {Method::TWO_TRIALS, Method::SCEPTICAL_CONTROLLED}) {
            std::string label = series_label(
                method == Method::TWO_TRIALS ? "two_trials power=" : "sceptical power=",
                original_power);
            for (int i = -8; i <= 20; ++i) {
                double c = std::pow(2.0, 0.25 * i);
                ProjectPowerQuery q;
                q.alpha = alpha;
                q.original_power = original_power;
                q.c = c;
                q.method = method;
                rows.push_back({c, label, project_power(q)});
            }
        }
    }
}

void figure_conditional_t1e(std::vector<FigureRow>& rows, double alpha) {
    for (double target : {0.8, 0.9, 0.95}) {
        std::string label = series_label("power=", target);
        for (int i = 0; i <= 50; ++i) {
            double p_o = (i == 0) ? 1e-4 : 0.0005 * i;
            DesignRequest req;
            req.z_o = std_normal_isf(p_o);
            req.alpha = alpha;
            req.target_power = target;
            req.power_kind = PowerKind::CONDITIONAL;
            req.method = Method::SCEPTICAL_CONTROLLED;
            DesignResult res = required_relative_sample_size(req);
            rows.push_back({p_o, label, res.conditional_t1e_at_design});
        }
    }
}

}  // namespace

std::vector<FigureRow> emit_figure_data(FigureId figure, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    std::vector<FigureRow> rows;
    switch (figure) {
        case FigureId::F1_CDF:
            figure_cdf(rows);
            break;
        case FigureId::F2_PS_VS_C:
            figure_ps_vs_c(rows);
            break;
        case FigureId::F3_REGIONS:
            figure_regions(rows, alpha);
            break;
        case FigureId::F4_POWER_RATIOS:
            figure_power_ratios(rows, alpha);
            break;
        case FigureId::F5_PROJECT_POWER:
            figure_project_power(rows, alpha);
            break;
        case FigureId::F6_COND_T1E:
            figure_conditional_t1e(rows, alpha);
            break;
    }
    return rows;
}

FigureId parse_figure_id(const std::string& name) {
    std::string key;
    key.reserve(name.size());
    for (char ch : name) key += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (key == "F1" || key == "F1_CDF") return FigureId::F1_CDF;
    if (key == "F2" || key == "F2_PS_VS_C") return FigureId::F2_PS_VS_C;
    if (key == "F3" || key == "F3_REGIONS") return FigureId::F3_REGIONS;
    if (key == "F4" || key == "F4_POWER_RATIOS") return FigureId::F4_POWER_RATIOS;
    if (key == "F5" || key == "F5_PROJECT_POWER") return FigureId::F5_PROJECT_POWER;
    if (key == "F6" || key == "F6_COND_T1E") return FigureId::F6_COND_T1E;
    throw std::invalid_argument("unknown figure id: " + name);
}

}  // namespace sceptic
