#include "relsig/cli.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "relsig/dsl.hpp"
#include "relsig/modular.hpp"
#include "relsig/oracle.hpp"

namespace relsig {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream stream(path);
    if (!stream) throw std::invalid_argument("cannot open file '" + path + "'");
    std::ostringstream content;
    content << stream.rdbuf();
    return content.str();
}

std::string decimal(const Rational& value) {
    std::ostringstream out;
    out << std::setprecision(12) << value.convert_to<double>();
    return out.str();
}

/// Parsed common options: positionals plus --key value pairs.
struct Options {
    std::vector<std::string> positional;
    std::map<std::string, std::string> flags;

    std::string flag_or(const std::string& key, const std::string& fallback) const {
        auto it = flags.find(key);
        return it == flags.end() ? fallback : it->second;
    }
    std::string required_flag(const std::string& key) const {
        auto it = flags.find(key);
        if (it == flags.end()) throw UsageError("missing required option --" + key);
        return it->second;
    }
    bool kv() const { return flag_or("format", "table") == "kv"; }
};

Options scan_options(const std::vector<std::string>& args, std::size_t start) {
    Options options;
    for (std::size_t i = start; i < args.size(); ++i) {
        if (args[i].rfind("--", 0) == 0) {
            if (i + 1 >= args.size()) throw UsageError("option " + args[i] + " needs a value");
            options.flags[args[i].substr(2)] = args[i + 1];
            ++i;
        } else {
            options.positional.push_back(args[i]);
        }
    }
    return options;
}

void print_vector(std::ostream& out, bool kv, const std::string& name,
                  const std::vector<Rational>& values, unsigned first_index) {
    if (kv) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << name << "." << first_index + i << "=" << format_rational(values[i]) << "\n";
            out << name << "." << first_index + i << ".dec=" << decimal(values[i]) << "\n";
        }
        return;
    }
    out << name << " = (";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << format_rational(values[i]);
    }
    out << ")  [";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << decimal(values[i]);
    }
    out << "]\n";
}

RelativeQualityFunction quality_for(const ElaboratedSystem& system, const Options& options,
                                    unsigned n) {
    auto it = options.flags.find("distribution");
    std::optional<std::string> path =
        it != options.flags.end() ? std::optional<std::string>(it->second) : system.distribution;
    if (!path) return q_symmetric(n);
    auto dist = parse_distribution(read_file(*path));
    if (dist.component_count() != n)
        throw std::invalid_argument("distribution size does not match the system");
    return q_from_order_distribution(dist);
}

int cmd_signature(const Options& options, std::ostream& out) {
    auto system = elaborate(parse_system(read_file(options.positional.at(0))));
    StructureFunction phi = system.structure();
    unsigned n = phi.component_count();
    if (!is_semicoherent(phi))
        throw std::invalid_argument("signature requires a semicoherent structure");

    bool has_dist = options.flags.count("distribution") || system.distribution;
    auto q = quality_for(system, options, n);
    auto tail = tail_probability_signature(phi, q);
    std::string base = has_dist ? "p" : "s";
    bool kv = options.kv();
    if (kv) out << "n=" << n << "\n";
    print_vector(out, kv, base, tail_to_signature(tail).entries, 1);
    print_vector(out, kv, base + "tail", tail.entries, 0);
    print_vector(out, kv, base + "cum", cumulative(tail), 0);
    return kExitOk;
}

int cmd_compose(const Options& options, std::ostream& out) {
    auto system = elaborate(parse_system(read_file(options.positional.at(0))));
    if (!system.is_modular())
        throw std::invalid_argument("compose needs a modular system file");
    const ModularSystem& modular = system.modular();
    const Partition& partition = modular.partition;
    unsigned n = partition.component_count();
    bool kv = options.kv();
    std::string mode = options.required_flag("coeffs");

    if (mode == "hypergeometric") {
        auto coeffs = hypergeometric_coefficients(partition);
        std::vector<TailSignatureVector> tails;
        for (unsigned j = 0; j < partition.block_count(); ++j)
            tails.push_back(tail_probability_signature(modular.modules[j],
                                                       q_symmetric(partition.block_size(j))));
        auto composed = compose_tail(modular.organizer, tails, coeffs);
        auto direct = tail_probability_signature(compose(modular), q_symmetric(n));
        print_vector(out, kv, "tail", composed.entries, 0);
        bool match = composed == direct;
        out << (kv ? std::string("verdict=") + (match ? "exact-match" : "mismatch")
                   : std::string(match ? "exact match" : "MISMATCH") +
                         " against direct computation")
            << "\n";
        return match ? kExitOk : kExitVerificationFailure;
    }

    if (mode == "from-distribution") {
        auto it = options.flags.find("distribution");
        std::string path = it != options.flags.end()
                               ? it->second
                               : system.distribution ? *system.distribution
                                                     : throw UsageError("--distribution required");
        auto dist = parse_distribution(read_file(path));
        if (dist.component_count() != n)
            throw std::invalid_argument("distribution size does not match the system");
        auto report = verify_composition_theorem(modular, dist);
        if (!report.decomposable) {
            out << (kv ? "decomposable=no" : "not decomposable") << "\n";
            if (report.counterexample) {
                out << (kv ? "counterexample=" : "counterexample subset: ");
                SubsetMask a = *report.counterexample;
                bool first = true;
                for (unsigned i = 0; i < n; ++i)
                    if (a & (SubsetMask{1} << i)) {
                        if (!first) out << ",";
                        out << i + 1;
                        first = false;
                    }
                out << "\n";
            }
            return kExitVerificationFailure;
        }
        print_vector(out, kv, "tail", report.composed.entries, 0);
        out << (kv ? std::string("verdict=") + (report.matches ? "exact-match" : "mismatch")
                   : std::string(report.matches ? "exact match" : "MISMATCH") +
                         " against direct computation")
            << "\n";
        return report.matches ? kExitOk : kExitVerificationFailure;
    }

    throw UsageError("--coeffs must be 'hypergeometric' or 'from-distribution'");
}

int cmd_quality(const Options& options, std::ostream& out) {
    auto dist = parse_distribution(read_file(options.positional.at(0)));
    unsigned n = dist.component_count();
    Partition partition = parse_partition(options.required_flag("partition"), n);
    std::string action = options.positional.size() > 1 ? options.positional[1] : "check-decomposable";
    auto q = q_from_order_distribution(dist);
    bool kv = options.kv();

    if (action == "check-symmetric") {
        out << (kv ? "symmetric=" : "symmetric: ") << (is_symmetric(q) ? "yes" : "no") << "\n";
        out << (kv ? "partition-symmetric=" : "C-symmetric: ")
            << (is_partition_symmetric(q, partition) ? "yes" : "no") << "\n";
        return kExitOk;
    }

    std::vector<RelativeQualityFunction> marginals;
    for (unsigned j = 0; j < partition.block_count(); ++j)
        marginals.push_back(marginal_quality(dist, partition.block(j)));
    auto check = check_decomposable(q, marginals, partition);

    if (action == "check-decomposable") {
        out << (kv ? "decomposable=" : "decomposable: ") << (check.decomposable() ? "yes" : "no")
            << (kv ? "\n" : "; ");
        if (!kv)
            out << "C-symmetric: " << (is_partition_symmetric(q, partition) ? "yes" : "no") << "\n";
        else
            out << "partition-symmetric=" << (is_partition_symmetric(q, partition) ? "yes" : "no")
                << "\n";
        return kExitOk;
    }

    if (action == "show-coeffs") {
        if (!check.decomposable()) {
            out << (kv ? "decomposable=no" : "not decomposable") << "\n";
            return kExitVerificationFailure;
        }
        const auto& coeffs = *check.coefficients;
        const auto& sizes = coeffs.block_sizes();
        for (unsigned k = 0; k <= n; ++k) {
            for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
                out << (kv ? "c." : "c(");
                for (std::size_t j = 0; j < a.size(); ++j) out << (j ? "," : "") << a[j];
                out << (kv ? "=" : ") = ") << format_rational(coeffs.at(a)) << "\n";
            });
        }
        return kExitOk;
    }

    throw UsageError("quality action must be check-symmetric, check-decomposable, or show-coeffs");
}

int cmd_recover_q(const Options& options, std::ostream& out) {
    auto dist = parse_distribution(read_file(options.positional.at(0)));
    unsigned n = dist.component_count();
    Partition partition = parse_partition(options.required_flag("partition"), n);
    auto q = q_from_order_distribution(dist);
    auto recovered = recover_q_via_conjunctions(q, partition);
    bool kv = options.kv();

    unsigned mismatches = 0;
    SubsetMask full = (SubsetMask{1} << n) - 1;
    for (SubsetMask b = 0; b <= full; ++b)
        if (q(b) != recovered(b)) ++mismatches;
    if (kv) {
        out << "subsets=" << (full + 1) << "\nmismatches=" << mismatches << "\n";
    } else {
        out << "recovered q over " << (full + 1) << " subsets; mismatches: " << mismatches << "\n";
    }
    return mismatches == 0 ? kExitOk : kExitVerificationFailure;
}

LifetimeSampler parse_sampler(const std::string& text, unsigned n) {
    if (text == "iid") return LifetimeSampler::iid(n);
    if (text == "pairs") return LifetimeSampler::exchangeable_pairs(n);
    if (text.rfind("blocks:", 0) == 0) {
        Partition partition = parse_partition(text.substr(7), n);
        std::vector<std::vector<unsigned>> blocks;
        for (unsigned j = 0; j < partition.block_count(); ++j)
            blocks.push_back(partition.block(j));
        return LifetimeSampler::block_product(std::move(blocks));
    }
    throw UsageError("--sampler must be 'iid', 'pairs', or 'blocks:<c>|<c>...'");
}

int cmd_simulate(const Options& options, std::ostream& out) {
    auto system = elaborate(parse_system(read_file(options.positional.at(0))));
    StructureFunction phi = system.structure();
    unsigned n = phi.component_count();
    auto sampler = parse_sampler(options.required_flag("sampler"), n);
    std::uint64_t trials = std::stoull(options.required_flag("trials"));
    std::uint64_t seed = std::stoull(options.flag_or("seed", "0"));
    bool kv = options.kv();

    auto result = monte_carlo_signature(phi, sampler, trials, seed);
    for (unsigned k = 0; k < n; ++k) {
        if (kv)
            out << "phat." << k + 1 << "=" << result.estimates[k] << "\n"
                << "stderr." << k + 1 << "=" << result.std_errors[k] << "\n";
        else
            out << "p_" << k + 1 << " = " << result.estimates[k] << " +/- "
                << result.std_errors[k] << "\n";
    }
    out << (kv ? "resamples=" : "tie resamples: ") << result.resamples << "\n";
    if (is_semicoherent(phi)) {
        auto reference = structural_signature(phi);
        print_vector(out, kv, kv ? "sref" : "structural reference s", reference.entries, 1);
    }
    return kExitOk;
}

int cmd_redundancy(const Options& options, std::ostream& out) {
    auto system = elaborate(parse_system(read_file(options.positional.at(0))));
    StructureFunction chi = system.structure();
    if (!is_semicoherent(chi))
        throw std::invalid_argument("redundancy analysis requires a semicoherent structure");
    unsigned n = chi.component_count();
    if (2 * n > kMaxComponents)
        throw std::invalid_argument("redundant structure would exceed the component cap");
    bool kv = options.kv();

    auto base_cumulative = cumulative(signature_to_tail(structural_signature(chi)));
    auto closed_system = system_redundancy_cumulative(base_cumulative);
    auto closed_component = component_redundancy_cumulative(chi);
    auto generic_system =
        cumulative(signature_to_tail(structural_signature(redundancy_at_system_level(chi))));
    auto generic_component =
        cumulative(signature_to_tail(structural_signature(redundancy_at_component_level(chi))));

    print_vector(out, kv, "S", base_cumulative, 0);
    print_vector(out, kv, "S1", closed_system, 0);
    print_vector(out, kv, "S2", closed_component, 0);

    bool closed_match = closed_system == generic_system && closed_component == generic_component;
    bool ordered = true;
    for (std::size_t k = 0; k < closed_system.size(); ++k)
        if (closed_component[k] > closed_system[k]) ordered = false;
    out << (kv ? "closed-forms=" : "closed forms vs generic: ")
        << (closed_match ? (kv ? "exact-match" : "exact match") : (kv ? "mismatch" : "MISMATCH"))
        << "\n";
    out << (kv ? "ordering=" : "component-level dominates (S2 <= S1): ")
        << (ordered ? "yes" : "no") << "\n";
    return closed_match && ordered ? kExitOk : kExitVerificationFailure;
}

const std::string kUsage =
    "usage: relsig <command> [options]\n"
    "commands:\n"
    "  signature <system> [--distribution <file>] [--format kv]\n"
    "  compose <system> --coeffs {hypergeometric|from-distribution}\n"
    "          [--distribution <file>] [--format kv]\n"
    "  quality <distribution> --partition <blocks>\n"
    "          {check-symmetric|check-decomposable|show-coeffs} [--format kv]\n"
    "  recover-q <distribution> --partition <blocks> [--format kv]\n"
    "  simulate <system> --sampler {iid|pairs|blocks:<spec>} --trials N [--seed S]\n"
    "  redundancy <system> [--format kv]\n";

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || args[0] == "--help" || args[0] == "help") {
        (args.empty() ? err : out) << kUsage;
        return args.empty() ? kExitUsage : kExitOk;
    }
    try {
        Options options = scan_options(args, 1);
        const std::string& command = args[0];
        auto need_positional = [&](std::size_t count) {
            if (options.positional.size() < count)
                throw UsageError("command '" + command + "' needs an input file");
        };
        if (command == "signature") {
            need_positional(1);
            return cmd_signature(options, out);
        }
        if (command == "compose") {
            need_positional(1);
            return cmd_compose(options, out);
        }
        if (command == "quality") {
            need_positional(1);
            return cmd_quality(options, out);
        }
        if (command == "recover-q") {
            need_positional(1);
            return cmd_recover_q(options, out);
        }
        if (command == "simulate") {
            need_positional(1);
            return cmd_simulate(options, out);
        }
        if (command == "redundancy") {
            need_positional(1);
            return cmd_redundancy(options, out);
        }
        err << "unknown command '" << command << "'\n" << kUsage;
        return kExitUsage;
    } catch (const UsageError& error) {
        err << "error: " << error.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& error) {
        err << "parse error: " << error.what() << "\n";
        return kExitParseError;
    } catch (const std::invalid_argument& error) {
        err << "validation error: " << error.what() << "\n";
        return kExitValidationError;
    } catch (const std::domain_error& error) {
        err << "validation error: " << error.what() << "\n";
        return kExitValidationError;
    }
}

}  // namespace relsig
