#pragma once

// Independent reference implementations and generators shared by the
// property tests and the acceptance runner.

#include <map>
#include <string>
#include <vector>

#include "pai/model.hpp"
#include "pai/rng.hpp"

namespace pai::oracle {

inline const std::vector<std::string>& author_pool() {
    static const std::vector<std::string> names = {"AmberFox", "BlueOwl", "CalmBear", "DarkElk", "EvenGnu", "FairHen"};
    return names;
}

/// Random tree grown by unchecked attaches; any shape is allowed.
inline ThreadTree random_tree(std::uint64_t seed, int max_nodes) {
    Rng rng(seed);
    ThreadTree tree("r" + std::to_string(seed), Attribute::age, "q", "d");
    const int n = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_nodes)));
    for (int i = 0; i < n; ++i) {
        CommentNode node;
        node.author = author_pool()[rng.uniform_below(author_pool().size())];
        node.text = "c";
        tree.attach(static_cast<CommentId>(rng.uniform_below(tree.size())), node);
    }
    return tree;
}

/// Depth by walking parent links; root depth 1.
inline int walk_depth(const ThreadTree& tree, CommentId id) {
    int d = 1;
    for (auto cur = tree.node(id).parent; cur; cur = tree.node(*cur).parent) ++d;
    return d;
}

inline bool is_descendant_or_self(const ThreadTree& tree, CommentId node, CommentId ancestor) {
    for (std::optional<CommentId> cur = node; cur; cur = tree.node(*cur).parent) {
        if (*cur == ancestor) return true;
    }
    return false;
}

/// Brute-force reply scores: for every eligible node, count the subtree by
/// testing ancestry of every node in the tree.
inline std::map<CommentId, double> brute_force_scores(const ThreadTree& tree, const std::string& agent,
                                                      const TreeLimits& limits) {
    std::map<CommentId, double> out;
    for (const auto& c : tree.nodes()) {
        const int depth = walk_depth(tree, c.id);
        if (depth >= limits.max_depth) continue;
        if (c.id != kRootId && static_cast<int>(c.children.size()) >= limits.max_fanout) continue;
        int own = 0, others = 0;
        for (const auto& n : tree.nodes()) {
            if (n.author == kSystemAuthor || !is_descendant_or_self(tree, n.id, c.id)) continue;
            if (n.author == agent) ++own;
            else ++others;
        }
        out[c.id] = (5.0 * own + (c.id == kRootId ? 2.0 : 0.0) + others) / depth;
    }
    return out;
}

}  // namespace pai::oracle
