#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "cmsa/errors.hpp"

namespace cmsa {

// Sentence-level sentiment polarity. The canonical class order everywhere in
// the toolkit (probability vectors, confusion matrices, pair enumeration) is
// (-1, 0, 1) = (negative, neutral, positive).
enum class Sentiment : int {
  negative = -1,
  neutral = 0,
  positive = 1,
};

inline constexpr int kNumClasses = 3;

inline constexpr std::array<Sentiment, 3> kClasses{
    Sentiment::negative, Sentiment::neutral, Sentiment::positive};

constexpr int to_int(Sentiment s) { return static_cast<int>(s); }

// Position of a class in the canonical order: -1 -> 0, 0 -> 1, 1 -> 2.
constexpr int class_index(Sentiment s) { return static_cast<int>(s) + 1; }

constexpr Sentiment class_at(int index) { return kClasses[static_cast<std::size_t>(index)]; }

// Throws LabelError when v is outside {-1, 0, 1}. `id` tags the error with
// the offending sample when the caller knows it.
Sentiment sentiment_from_int(long long v, long long id = 0);

// "Negative" / "Neutral" / "Positive", the row names of the report table.
const char* sentiment_name(Sentiment s);

// Index of the largest probability, ties broken toward the smaller
// sentiment value. Shared tie-break rule of every predictor.
Sentiment argmax_sentiment(const std::array<double, 3>& probs);

// A classified sample: the label plus the class-probability vector that
// produced it, in canonical class order.
struct Prediction {
  Sentiment label = Sentiment::negative;
  std::array<double, 3> probs{};
};

}  // namespace cmsa
