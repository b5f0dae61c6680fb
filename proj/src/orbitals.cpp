#include "eprx/orbitals.hpp"

#include "eprx/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace eprx {

namespace {

constexpr double kRescaleThreshold = 1e150;
constexpr double kLogUnderflow = -745.0;

double scaled_value(double p, double log_scale) {
    if (p == 0.0) {
        return 0.0;
    }
    const double e = log_scale + std::log(std::abs(p));
    if (e < kLogUnderflow) {
        return 0.0;
    }
    return std::copysign(std::exp(e), p);
}

}  // namespace

void OscillatorParams::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ConfigError("oscillator mass must be positive, got " + short_double(mass));
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw ConfigError("oscillator frequency must be positive, got " + short_double(omega));
    }
}

OverlapTable::OverlapTable(OscillatorParams params, Eigen::MatrixXd left, Eigen::MatrixXd right,
                           double quadrature_error, double quadrature_tolerance)
    : params_(params),
      left_(std::move(left)),
      right_(std::move(right)),
      quadrature_error_(quadrature_error),
      quadrature_tolerance_(quadrature_tolerance) {
    if (left_.rows() != left_.cols() || right_.rows() != right_.cols() ||
        left_.rows() != right_.rows() || left_.rows() < 1) {
        throw ConfigError("overlap matrices must be square, equal and non-empty");
    }
}

OverlapTable OverlapTable::truncated(int modes) const {
    if (modes < 1 || modes > this->modes()) {
        throw ConfigError("cannot truncate a " + std::to_string(this->modes()) +
                          "-mode overlap table to " + std::to_string(modes) + " modes");
    }
    return OverlapTable(params_, left_.topLeftCorner(modes, modes), right_.topLeftCorner(modes, modes),
                        quadrature_error_, quadrature_tolerance_);
}

std::vector<double> eval_orbitals(int modes, double x, const OscillatorParams& params) {
    if (modes < 0) {
        throw ConfigError("mode count must be non-negative");
    }
    std::vector<double> out(static_cast<std::size_t>(modes), 0.0);
    if (modes == 0) {
        return out;
    }
    const double mw = params.mass * params.omega;
    const double xi = std::sqrt(mw) * x;
    double log_scale = 0.25 * std::log(mw / std::numbers::pi) - 0.5 * xi * xi;

    double prev = 0.0;
    double cur = 1.0;
    out[0] = scaled_value(cur, log_scale);
    for (int k = 0; k + 1 < modes; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescaleThreshold) {
            prev /= kRescaleThreshold;
            cur /= kRescaleThreshold;
            log_scale += std::log(kRescaleThreshold);
        }
        out[static_cast<std::size_t>(k + 1)] = scaled_value(cur, log_scale);
    }
    return out;
}

double eval_orbital(int k, double x, const OscillatorParams& params) {
    if (k < 0) {
        throw ConfigError("orbital index must be non-negative");
    }
    return eval_orbitals(k + 1, x, params).back();
}

double integration_cutoff(int modes, const OscillatorParams& params) {
    // Highest turning point plus a margin of 10 oscillator lengths.
    const double xi_max = std::sqrt(2.0 * (2.0 * modes + 1.0)) + 10.0;
    return xi_max / std::sqrt(params.mass * params.omega);
}

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) {
        throw ConfigError("Gauss-Legendre rule needs at least one node");
    }
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

namespace {

// Right-half overlaps for every (k,l) on a composite rule with `panels` panels.
Eigen::MatrixXd right_overlaps(int modes, const OscillatorParams& params, const GaussLegendreRule& rule,
                               int panels) {
    const double x_max = integration_cutoff(modes, params);
    const double h = x_max / panels;
    const auto per_panel = static_cast<Eigen::Index>(rule.nodes.size());
    const Eigen::Index node_count = per_panel * panels;

    Eigen::MatrixXd weighted(node_count, modes);
    Eigen::MatrixXd phi(node_count, modes);
    for (int p = 0; p < panels; ++p) {
        const double a = p * h;
        for (Eigen::Index i = 0; i < per_panel; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double x = a + 0.5 * h * (rule.nodes[ui] + 1.0);
            const double w = 0.5 * h * rule.weights[ui];
            const auto values = eval_orbitals(modes, x, params);
            const Eigen::Index row = p * per_panel + i;
            for (int k = 0; k < modes; ++k) {
                phi(row, k) = values[static_cast<std::size_t>(k)];
                weighted(row, k) = w * values[static_cast<std::size_t>(k)];
            }
        }
    }
    Eigen::MatrixXd right = phi.transpose() * weighted;
    for (int k = 0; k < modes; ++k) {
        for (int l = 0; l < k; ++l) {
            right(k, l) = right(l, k);
        }
    }
    return right;
}

}  // namespace

OverlapTable build_overlap_table(int modes, const OscillatorParams& params, const QuadratureOptions& options) {
    if (modes < 1) {
        throw ConfigError("mode count K must be >= 1, got " + std::to_string(modes));
    }
    params.validate();
    if (!(options.tolerance > 0.0)) {
        throw ConfigError("quadrature tolerance must be positive");
    }
    const auto rule = gauss_legendre(options.nodes_per_panel);
    // One panel per oscillator length to start with.
    int panels = std::max(4, static_cast<int>(std::ceil(integration_cutoff(modes, params) *
                                                        std::sqrt(params.mass * params.omega))));

    Eigen::MatrixXd coarse = right_overlaps(modes, params, rule, panels);
    double error = 0.0;
    int worst_k = 0;
    int worst_l = 0;
    for (int refinement = 0;; ++refinement) {
        panels *= 2;
        Eigen::MatrixXd fine = right_overlaps(modes, params, rule, panels);
        error = 0.0;
        for (int k = 0; k < modes; ++k) {
            for (int l = k + 1; l < modes; l += 2) {
                const double d = std::abs(fine(k, l) - coarse(k, l));
                if (d > error) {
                    error = d;
                    worst_k = k;
                    worst_l = l;
                }
            }
        }
        coarse = std::move(fine);
        if (error < options.tolerance) {
            break;
        }
        if (refinement + 1 >= options.max_refinements) {
            std::ostringstream msg;
            msg << "overlap quadrature did not converge for K=" << modes << ": entry (" << worst_k << ","
                << worst_l << ") changed by " << error << " > " << options.tolerance;
            throw NumericalError(msg.str());
        }
    }

    Eigen::MatrixXd right(modes, modes);
    Eigen::MatrixXd left(modes, modes);
    for (int k = 0; k < modes; ++k) {
        for (int l = 0; l < modes; ++l) {
            if ((k + l) % 2 == 0) {
                right(k, l) = (k == l) ? 0.5 : 0.0;
                left(k, l) = right(k, l);
            } else {
                right(k, l) = coarse(k, l);
                left(k, l) = -coarse(k, l);
            }
        }
    }
    return OverlapTable(params, std::move(left), std::move(right), error, options.tolerance);
}

void write_overlap_csv(const OverlapTable& table, std::ostream& out) {
    out << "k,l,lambdaL,lambdaR\n";
    out << std::setprecision(17);
    for (int k = 0; k < table.modes(); ++k) {
        for (int l = 0; l < table.modes(); ++l) {
            out << k << ',' << l << ',' << table.left(k, l) << ',' << table.right(k, l) << '\n';
        }
    }
}

void write_overlap_csv(const OverlapTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open " + path.string() + " for writing");
    }
    write_overlap_csv(table, out);
}

OverlapTable read_overlap_csv(const std::filesystem::path& path, const OscillatorParams& params) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::string line;
    std::vector<std::tuple<int, int, double, double>> rows;
    double qerr = 0.0;
    double qtol = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string token;
            while (meta >> token) {
                if (token.rfind("qerr=", 0) == 0) {
                    qerr = std::stod(token.substr(5));
                } else if (token.rfind("qtol=", 0) == 0) {
                    qtol = std::stod(token.substr(5));
                }
            }
            continue;
        }
        if (line.rfind("k,", 0) == 0) {
            continue;
        }
        std::istringstream fields(line);
        std::string a, b, c, d;
        if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c, ',') ||
            !std::getline(fields, d)) {
            throw ConfigError("malformed overlap row: " + line);
        }
        rows.emplace_back(std::stoi(a), std::stoi(b), std::stod(c), std::stod(d));
    }
    const auto modes = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows.size()))));
    if (modes < 1 || static_cast<std::size_t>(modes) * static_cast<std::size_t>(modes) != rows.size()) {
        throw ConfigError("overlap CSV " + path.string() + " does not hold a square table");
    }
    Eigen::MatrixXd left(modes, modes);
    Eigen::MatrixXd right(modes, modes);
    for (const auto& [k, l, lv, rv] : rows) {
        if (k < 0 || l < 0 || k >= modes || l >= modes) {
            throw ConfigError("overlap CSV index out of range");
        }
        left(k, l) = lv;
        right(k, l) = rv;
    }
    return OverlapTable(params, std::move(left), std::move(right), qerr, qtol);
}

namespace {

using CacheKey = std::tuple<int, double, double, double, int>;

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

std::map<CacheKey, OverlapTable>& memo() {
    static std::map<CacheKey, OverlapTable> tables;
    return tables;
}

std::string cache_file_name(int modes, const OscillatorParams& params, const QuadratureOptions& options) {
    std::ostringstream name;
    name << std::setprecision(17) << "lambda_K" << modes << "_m" << params.mass << "_w" << params.omega << "_tol"
         << options.tolerance << "_n" << options.nodes_per_panel << ".csv";
    return name.str();
}

}  // namespace

OverlapTable cached_overlap_table(int modes, const OscillatorParams& params, const QuadratureOptions& options,
                                  std::optional<std::filesystem::path> cache_dir) {
    const CacheKey key{modes, params.mass, params.omega, options.tolerance, options.nodes_per_panel};
    std::lock_guard lock(cache_mutex());
    if (auto it = memo().find(key); it != memo().end()) {
        return it->second;
    }
    if (!cache_dir) {
        if (const char* env = std::getenv("EPRX_CACHE_DIR"); env != nullptr && *env != '\0') {
            cache_dir = std::filesystem::path(env);
        }
    }
    std::optional<OverlapTable> table;
    std::filesystem::path file;
    if (cache_dir) {
        file = *cache_dir / cache_file_name(modes, params, options);
        if (std::filesystem::exists(file)) {
            auto loaded = read_overlap_csv(file, params);
            if (loaded.modes() == modes) {
                table = std::move(loaded);
            }
        }
    }
    if (!table) {
        table = build_overlap_table(modes, params, options);
        if (cache_dir) {
            std::filesystem::create_directories(*cache_dir);
            const auto tmp = file.string() + ".tmp";
            {
                std::ofstream out(tmp);
                out << std::setprecision(17) << "# K=" << modes << " m=" << params.mass << " omega=" << params.omega
                    << " qtol=" << options.tolerance << " qerr=" << table->quadrature_error() << '\n';
                write_overlap_csv(*table, out);
            }
            std::filesystem::rename(tmp, file);
        }
    }
    memo().emplace(key, *table);
    return *table;
}

}  // namespace eprx
