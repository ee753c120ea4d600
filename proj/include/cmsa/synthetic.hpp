#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "cmsa/corpus.hpp"

namespace cmsa {

// Generates a labeled code-mixed corpus with the failure modes of real
// social-media text: sentiment is carried by word stems, every token is
// subject to random romanized spelling variation (hai/haii/he/hey style)
// and adjacent tokens are randomly agglutinated. Deterministic given the
// seed; ids are consecutive and unique.
Dataset make_synthetic_corpus(std::size_t n_samples, std::uint64_t seed);

// The same corpus rendered in the shared-task JSON format.
std::string make_synthetic_corpus_json(std::size_t n_samples, std::uint64_t seed);

}  // namespace cmsa
