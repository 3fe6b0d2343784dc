#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::logic {

struct Symbol {
    std::string name;
    int arity = 1;
    bool counted = true;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Relation symbols with unique names. Counted symbols are the free relations
/// enumerated when counting; the others carry a fixed interpretation.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<Symbol> symbols) {
        for (auto& s : symbols) add(std::move(s));
    }

    Vocabulary& add(Symbol s) {
        if (s.name.empty()) throw std::invalid_argument("symbol name must be nonempty");
        if (s.arity < 1) throw std::invalid_argument("symbol '" + s.name + "' must have positive arity");
        if (find(s.name)) throw std::invalid_argument("duplicate symbol '" + s.name + "'");
        max_arity_ = std::max(max_arity_, s.arity);
        symbols_.push_back(std::move(s));
        return *this;
    }
    Vocabulary& add(std::string name, int arity, bool counted = true) {
        return add(Symbol{std::move(name), arity, counted});
    }

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    int max_arity() const { return max_arity_; }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i].name == name) return i;
        return std::nullopt;
    }
    std::size_t index_of(const std::string& name) const {
        auto i = find(name);
        if (!i) throw std::out_of_range("unknown symbol '" + name + "'");
        return *i;
    }

    bool all_unary() const {
        return std::all_of(symbols_.begin(), symbols_.end(), [](const Symbol& s) { return s.arity == 1; });
    }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<Symbol> symbols_;
    int max_arity_ = 0;
};

}  // namespace specker::logic
