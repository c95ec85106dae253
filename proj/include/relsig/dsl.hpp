#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relsig/quality.hpp"
#include "relsig/structure.hpp"

namespace relsig {

/// Parse failure with 1-based source position.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string message, unsigned line, unsigned column)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    unsigned line() const { return line_; }
    unsigned column() const { return column_; }

  private:
    unsigned line_;
    unsigned column_;
};

/// Abstract syntax of the structure DSL:
///   expr     := atom | combinator
///   atom     := x<int> | <module name>
///   combinator := series(e,...) | parallel(e,...) | koutofn(k; e,...)
/// with min/max as aliases for series/parallel. Component indices are
/// 1-based in the concrete syntax.
struct StructureExpr {
    enum class Kind { Component, ModuleRef, Series, Parallel, KOutOfN };

    Kind kind = Kind::Component;
    unsigned component = 0;        // 1-based, Kind::Component
    std::string module_name;       // Kind::ModuleRef
    unsigned threshold = 0;        // Kind::KOutOfN
    std::vector<StructureExpr> children;
};

/// Parses a single structure expression. Rejects duplicate component
/// indices and out-of-range koutofn thresholds.
StructureExpr parse_structure(const std::string& text);

/// Canonical text form; reparsing yields an equal AST.
std::string print_structure(const StructureExpr& expr);

bool operator==(const StructureExpr& a, const StructureExpr& b);

/// Sorted 1-based component indices referenced by the expression.
std::vector<unsigned> structure_components(const StructureExpr& expr);

/// A parsed system file: either a flat structure or named modules with an
/// organizer, plus an optional distribution file reference.
struct SystemSpec {
    unsigned n = 0;
    std::optional<StructureExpr> flat;
    struct Module {
        std::string name;
        std::vector<unsigned> components;  // 1-based, in declaration order
        StructureExpr expr;
    };
    std::vector<Module> modules;
    std::optional<StructureExpr> organizer;
    std::optional<std::string> distribution;
};

SystemSpec parse_system(const std::string& text);

/// Truth table of an expression over an explicit 1-based component list;
/// every listed component must appear exactly once in the expression.
StructureFunction build_structure(const StructureExpr& expr,
                                  const std::vector<unsigned>& components);

/// Elaboration result: modular specs keep their decomposition, flat specs
/// yield a single structure function.
struct ElaboratedSystem {
    std::variant<StructureFunction, ModularSystem> value;
    std::optional<std::string> distribution;

    bool is_modular() const { return std::holds_alternative<ModularSystem>(value); }
    const ModularSystem& modular() const { return std::get<ModularSystem>(value); }
    /// The composed (or flat) structure function.
    StructureFunction structure() const;
};

ElaboratedSystem elaborate(const SystemSpec& spec);

/// Distribution file: `uniform n=<n>`, or `order-distribution n=<n>`
/// followed by `<permutation> <mass>` lines (omitted orders have mass 0),
/// or `product n=<n>` followed by `block <components>` lines.
OrderDistribution parse_distribution(const std::string& text);

/// Partition in the CLI notation "1,2|3,4" (1-based).
Partition parse_partition(const std::string& text, unsigned n);

}  // namespace relsig
