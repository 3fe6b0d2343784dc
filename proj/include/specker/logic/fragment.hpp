#pragma once

#include "specker/logic/formula.hpp"
#include "specker/logic/vocabulary.hpp"

#include <algorithm>
#include <string>

namespace specker::logic {

enum class Fragment { FOL, MSOL, CMSOL };

inline const char* fragment_name(Fragment f) {
    switch (f) {
    case Fragment::FOL: return "FOL";
    case Fragment::MSOL: return "MSOL";
    case Fragment::CMSOL: return "CMSOL";
    }
    return "?";
}

struct FragmentTag {
    Fragment fragment = Fragment::FOL;
    bool ordered = false;
    int max_arity = 0;

    friend bool operator==(const FragmentTag&, const FragmentTag&) = default;
};

namespace detail {
inline void classify(const Formula& f, const Vocabulary* vocab, FragmentTag& tag, bool& has_set, bool& has_cmod) {
    switch (f->op) {
    case Op::ForallSet:
    case Op::ExistsSet:
        // set variables are unary relations
        has_set = true;
        tag.max_arity = std::max(tag.max_arity, 1);
        break;
    case Op::CountMod: has_cmod = true; break;
    case Op::Lt: tag.ordered = true; break;
    case Op::Rel: {
        int arity = static_cast<int>(f->terms.size());
        if (vocab)
            if (auto i = vocab->find(f->rel)) arity = (*vocab)[*i].arity;
        tag.max_arity = std::max(tag.max_arity, arity);
        break;
    }
    default: break;
    }
    for (const auto& k : f->kids) classify(k, vocab, tag, has_set, has_cmod);
}
}  // namespace detail

/// Least fragment containing the constructs that occur in `phi`.
inline FragmentTag classify_fragment(const Formula& phi, const Vocabulary* vocab = nullptr) {
    FragmentTag tag;
    bool has_set = false, has_cmod = false;
    detail::classify(phi, vocab, tag, has_set, has_cmod);
    tag.fragment = has_cmod ? Fragment::CMSOL : has_set ? Fragment::MSOL : Fragment::FOL;
    return tag;
}

}  // namespace specker::logic
