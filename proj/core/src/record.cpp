#include "dyncluster/record.hpp"

#include <algorithm>

namespace dyncluster {

TokenSet make_token_set(std::vector<std::string> tokens) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return TokenSet{std::move(tokens)};
}

}  // namespace dyncluster
