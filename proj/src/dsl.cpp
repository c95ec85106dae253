#include "relsig/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace relsig {

namespace {

class ExprParser {
  public:
    ExprParser(const std::string& text, unsigned start_line = 1, unsigned start_column = 1)
        : text_(text), line_(start_line), column_(start_column) {}

    StructureExpr parse() {
        StructureExpr expr = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return expr;
    }

  private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, column_);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string identifier() {
        skip_ws();
        if (!std::isalpha(static_cast<unsigned char>(peek())) && peek() != '_')
            fail("expected an identifier");
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            name.push_back(advance());
        return name;
    }

    unsigned integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
        unsigned value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            value = value * 10 + static_cast<unsigned>(advance() - '0');
        return value;
    }

    std::vector<StructureExpr> argument_list() {
        std::vector<StructureExpr> args;
        args.push_back(parse_expr());
        skip_ws();
        while (peek() == ',') {
            advance();
            args.push_back(parse_expr());
            skip_ws();
        }
        expect(')');
        return args;
    }

    StructureExpr parse_expr() {
        skip_ws();
        unsigned at_line = line_, at_column = column_;
        std::string name = identifier();
        skip_ws();

        if (peek() == '(') {
            advance();
            StructureExpr expr;
            if (name == "series" || name == "min") {
                expr.kind = StructureExpr::Kind::Series;
                expr.children = argument_list();
            } else if (name == "parallel" || name == "max") {
                expr.kind = StructureExpr::Kind::Parallel;
                expr.children = argument_list();
            } else if (name == "koutofn") {
                expr.kind = StructureExpr::Kind::KOutOfN;
                expr.threshold = integer();
                expect(';');
                expr.children = argument_list();
                if (expr.threshold < 1 || expr.threshold > expr.children.size())
                    throw ParseError("koutofn threshold out of range", at_line, at_column);
            } else {
                throw ParseError("unknown combinator '" + name + "'", at_line, at_column);
            }
            return expr;
        }

        StructureExpr expr;
        if (name.size() > 1 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            expr.kind = StructureExpr::Kind::Component;
            expr.component = static_cast<unsigned>(std::stoul(name.substr(1)));
            if (expr.component == 0)
                throw ParseError("component indices are 1-based", at_line, at_column);
            if (!seen_components_.insert(expr.component).second)
                throw ParseError("duplicate component index x" + std::to_string(expr.component),
                                 at_line, at_column);
        } else {
            expr.kind = StructureExpr::Kind::ModuleRef;
            expr.module_name = name;
        }
        return expr;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    unsigned line_;
    unsigned column_;
    std::set<unsigned> seen_components_;
};

void collect_components(const StructureExpr& expr, std::vector<unsigned>& out) {
    if (expr.kind == StructureExpr::Kind::Component) out.push_back(expr.component);
    for (const auto& child : expr.children) collect_components(child, out);
}

void collect_module_refs(const StructureExpr& expr, std::vector<std::string>& out) {
    if (expr.kind == StructureExpr::Kind::ModuleRef) out.push_back(expr.module_name);
    for (const auto& child : expr.children) collect_module_refs(child, out);
}

bool evaluate(const StructureExpr& expr, SubsetMask mask,
              const std::map<unsigned, unsigned>& position_of) {
    switch (expr.kind) {
        case StructureExpr::Kind::Component:
            return mask & (SubsetMask{1} << position_of.at(expr.component));
        case StructureExpr::Kind::ModuleRef:
            throw std::invalid_argument("module reference outside an organizer expression");
        case StructureExpr::Kind::Series:
            return std::all_of(expr.children.begin(), expr.children.end(),
                               [&](const auto& c) { return evaluate(c, mask, position_of); });
        case StructureExpr::Kind::Parallel:
            return std::any_of(expr.children.begin(), expr.children.end(),
                               [&](const auto& c) { return evaluate(c, mask, position_of); });
        case StructureExpr::Kind::KOutOfN: {
            unsigned working = 0;
            for (const auto& child : expr.children)
                if (evaluate(child, mask, position_of)) ++working;
            return working >= expr.threshold;
        }
    }
    return false;
}

/// Replace module-name atoms with 1-based positional components.
StructureExpr organizer_to_positional(const StructureExpr& expr,
                                      const std::map<std::string, unsigned>& position_of) {
    StructureExpr result = expr;
    if (expr.kind == StructureExpr::Kind::ModuleRef) {
        result.kind = StructureExpr::Kind::Component;
        result.component = position_of.at(expr.module_name) + 1;
        result.module_name.clear();
    }
    for (auto& child : result.children)
        child = organizer_to_positional(child, position_of);
    return result;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream stream(line);
    std::vector<std::string> tokens;
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

std::vector<unsigned> parse_index_list(const std::string& text, unsigned line_no) {
    std::vector<unsigned> indices;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            unsigned long value = std::stoul(item, &used);
            if (used != item.size() || value == 0) throw std::invalid_argument(item);
            indices.push_back(static_cast<unsigned>(value));
        } catch (const std::exception&) {
            throw ParseError("malformed component list '" + text + "'", line_no, 1);
        }
    }
    if (indices.empty()) throw ParseError("empty component list", line_no, 1);
    return indices;
}

unsigned parse_n_field(const std::string& token, unsigned line_no) {
    if (token.rfind("n=", 0) != 0) throw ParseError("expected n=<count>", line_no, 1);
    try {
        return static_cast<unsigned>(std::stoul(token.substr(2)));
    } catch (const std::exception&) {
        throw ParseError("malformed component count '" + token + "'", line_no, 1);
    }
}

bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

StructureExpr parse_structure(const std::string& text) {
    return ExprParser(text).parse();
}

std::string print_structure(const StructureExpr& expr) {
    switch (expr.kind) {
        case StructureExpr::Kind::Component:
            return "x" + std::to_string(expr.component);
        case StructureExpr::Kind::ModuleRef:
            return expr.module_name;
        default:
            break;
    }
    std::string out;
    if (expr.kind == StructureExpr::Kind::KOutOfN)
        out = "koutofn(" + std::to_string(expr.threshold) + "; ";
    else
        out = expr.kind == StructureExpr::Kind::Series ? "series(" : "parallel(";
    for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i) out += ", ";
        out += print_structure(expr.children[i]);
    }
    return out + ")";
}

bool operator==(const StructureExpr& a, const StructureExpr& b) {
    return a.kind == b.kind && a.component == b.component && a.module_name == b.module_name &&
           a.threshold == b.threshold && a.children == b.children;
}

std::vector<unsigned> structure_components(const StructureExpr& expr) {
    std::vector<unsigned> components;
    collect_components(expr, components);
    std::sort(components.begin(), components.end());
    return components;
}

SystemSpec parse_system(const std::string& text) {
    SystemSpec spec;
    std::istringstream stream(text);
    std::string line;
    unsigned line_no = 0;
    bool saw_header = false;
    while (std::getline(stream, line)) {
        ++line_no;
        if (is_blank_or_comment(line)) continue;
        std::istringstream words(line);
        std::string keyword;
        words >> keyword;
        std::string rest;
        std::getline(words, rest);

        if (keyword == "system") {
            auto tokens = tokenize(rest);
            if (tokens.size() != 1) throw ParseError("expected 'system n=<count>'", line_no, 1);
            spec.n = parse_n_field(tokens[0], line_no);
            saw_header = true;
        } else if (!saw_header) {
            throw ParseError("file must start with a 'system n=<count>' line", line_no, 1);
        } else if (keyword == "structure") {
            spec.flat = ExprParser(rest, line_no).parse();
        } else if (keyword == "module") {
            std::istringstream body(rest);
            std::string name, comp_kw, comp_list, struct_kw;
            body >> name >> comp_kw >> comp_list >> struct_kw;
            std::string expr_text;
            std::getline(body, expr_text);
            if (comp_kw != "components" || struct_kw != "structure")
                throw ParseError("expected 'module <name> components <list> structure <expr>'",
                                 line_no, 1);
            SystemSpec::Module module;
            module.name = name;
            module.components = parse_index_list(comp_list, line_no);
            module.expr = ExprParser(expr_text, line_no).parse();
            spec.modules.push_back(std::move(module));
        } else if (keyword == "organizer") {
            spec.organizer = ExprParser(rest, line_no).parse();
        } else if (keyword == "distribution") {
            auto tokens = tokenize(rest);
            if (tokens.size() != 1) throw ParseError("expected 'distribution <file>'", line_no, 1);
            spec.distribution = tokens[0];
        } else {
            throw ParseError("unknown directive '" + keyword + "'", line_no, 1);
        }
    }
    if (!saw_header) throw ParseError("missing 'system n=<count>' header", 1, 1);
    if (spec.flat && !spec.modules.empty())
        throw ParseError("a system is either flat or modular, not both", 1, 1);
    if (!spec.flat && spec.modules.empty())
        throw ParseError("a system needs a structure or modules", 1, 1);
    if (!spec.modules.empty() && !spec.organizer)
        throw ParseError("modular systems need an organizer", 1, 1);
    return spec;
}

StructureFunction build_structure(const StructureExpr& expr,
                                  const std::vector<unsigned>& components) {
    auto referenced = structure_components(expr);
    std::vector<unsigned> expected = components;
    std::sort(expected.begin(), expected.end());
    if (referenced != expected)
        throw std::invalid_argument(
            "expression must reference each listed component exactly once");

    std::map<unsigned, unsigned> position_of;
    for (unsigned pos = 0; pos < components.size(); ++pos) position_of[components[pos]] = pos;

    StructureFunction result(static_cast<unsigned>(components.size()));
    for (SubsetMask mask = 0; mask <= result.full_mask(); ++mask)
        result.set(mask, evaluate(expr, mask, position_of));
    return result;
}

StructureFunction ElaboratedSystem::structure() const {
    if (is_modular()) return compose(modular());
    return std::get<StructureFunction>(value);
}

ElaboratedSystem elaborate(const SystemSpec& spec) {
    if (spec.n == 0) throw std::invalid_argument("system needs at least one component");
    ElaboratedSystem result{StructureFunction(1), spec.distribution};

    if (spec.flat) {
        std::vector<unsigned> all(spec.n);
        for (unsigned i = 0; i < spec.n; ++i) all[i] = i + 1;
        result.value = build_structure(*spec.flat, all);
        return result;
    }

    std::vector<std::vector<unsigned>> blocks;
    std::map<std::string, unsigned> module_position;
    std::vector<StructureFunction> module_tables;
    for (const auto& module : spec.modules) {
        if (!module_position.emplace(module.name, blocks.size()).second)
            throw std::invalid_argument("duplicate module name '" + module.name + "'");
        std::vector<unsigned> zero_based;
        for (unsigned i : module.components) {
            if (i < 1 || i > spec.n)
                throw std::invalid_argument("module component index out of range");
            zero_based.push_back(i - 1);
        }
        blocks.push_back(std::move(zero_based));
        module_tables.push_back(build_structure(module.expr, module.components));
    }
    Partition partition(spec.n, std::move(blocks));

    std::vector<std::string> refs;
    collect_module_refs(*spec.organizer, refs);
    std::vector<std::string> sorted_refs = refs;
    std::sort(sorted_refs.begin(), sorted_refs.end());
    if (std::adjacent_find(sorted_refs.begin(), sorted_refs.end()) != sorted_refs.end())
        throw std::invalid_argument("organizer references a module twice");
    if (refs.size() != spec.modules.size())
        throw std::invalid_argument("organizer must reference every module exactly once");
    for (const auto& name : refs)
        if (!module_position.count(name))
            throw std::invalid_argument("organizer references unknown module '" + name + "'");

    auto positional = organizer_to_positional(*spec.organizer, module_position);
    std::vector<unsigned> organizer_components(spec.modules.size());
    for (unsigned j = 0; j < organizer_components.size(); ++j) organizer_components[j] = j + 1;
    StructureFunction organizer = build_structure(positional, organizer_components);

    result.value =
        ModularSystem{std::move(partition), std::move(module_tables), std::move(organizer)};
    return result;
}

OrderDistribution parse_distribution(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    unsigned line_no = 0;

    // Header line.
    std::string kind;
    unsigned n = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (is_blank_or_comment(line)) continue;
        auto tokens = tokenize(line);
        if (tokens.size() != 2)
            throw ParseError("expected '<kind> n=<count>' header", line_no, 1);
        kind = tokens[0];
        n = parse_n_field(tokens[1], line_no);
        break;
    }
    if (kind.empty()) throw ParseError("empty distribution file", 1, 1);

    if (kind == "uniform") return OrderDistribution::uniform(n);

    if (kind == "order-distribution") {
        OrderDistribution dist(n);
        while (std::getline(stream, line)) {
            ++line_no;
            if (is_blank_or_comment(line)) continue;
            auto tokens = tokenize(line);
            if (tokens.size() != n + 1)
                throw ParseError("expected " + std::to_string(n) + " components and a mass",
                                 line_no, 1);
            std::vector<unsigned> perm;
            for (unsigned i = 0; i < n; ++i) {
                auto indices = parse_index_list(tokens[i], line_no);
                if (indices.size() != 1 || indices[0] > n)
                    throw ParseError("invalid component index '" + tokens[i] + "'", line_no, 1);
                perm.push_back(indices[0] - 1);
            }
            std::vector<unsigned> sorted = perm;
            std::sort(sorted.begin(), sorted.end());
            for (unsigned i = 0; i < n; ++i)
                if (sorted[i] != i)
                    throw ParseError("line must list each component exactly once", line_no, 1);
            Rational mass;
            try {
                mass = parse_rational(tokens[n]);
            } catch (const std::invalid_argument& error) {
                throw ParseError(error.what(), line_no, 1);
            }
            dist.set_mass(perm, std::move(mass));
        }
        dist.validate();
        return dist;
    }

    if (kind == "product") {
        std::vector<std::vector<unsigned>> blocks;
        while (std::getline(stream, line)) {
            ++line_no;
            if (is_blank_or_comment(line)) continue;
            auto tokens = tokenize(line);
            if (tokens.size() != 2 || tokens[0] != "block")
                throw ParseError("expected 'block <components>'", line_no, 1);
            std::vector<unsigned> zero_based;
            for (unsigned i : parse_index_list(tokens[1], line_no)) zero_based.push_back(i - 1);
            blocks.push_back(std::move(zero_based));
        }
        return OrderDistribution::block_product(Partition(n, std::move(blocks)));
    }

    throw ParseError("unknown distribution kind '" + kind + "'", line_no, 1);
}

Partition parse_partition(const std::string& text, unsigned n) {
    std::vector<std::vector<unsigned>> blocks;
    std::istringstream stream(text);
    std::string part;
    while (std::getline(stream, part, '|')) {
        std::vector<unsigned> zero_based;
        for (unsigned i : parse_index_list(part, 1)) {
            if (i < 1 || i > n) throw std::invalid_argument("partition index out of range");
            zero_based.push_back(i - 1);
        }
        blocks.push_back(std::move(zero_based));
    }
    return Partition(n, std::move(blocks));
}

}  // namespace relsig
