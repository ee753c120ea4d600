#include "cmsa/sentiment.hpp"

#include <string>

namespace cmsa {

Sentiment sentiment_from_int(long long v, long long id) {
  switch (v) {
    case -1:
      return Sentiment::negative;
    case 0:
      return Sentiment::neutral;
    case 1:
      return Sentiment::positive;
    default:
      throw LabelError("sentiment value " + std::to_string(v) +
                           " outside {-1, 0, 1} (id " + std::to_string(id) + ")",
                       id);
  }
}

const char* sentiment_name(Sentiment s) {
  switch (s) {
    case Sentiment::negative:
      return "Negative";
    case Sentiment::neutral:
      return "Neutral";
    default:
      return "Positive";
  }
}

Sentiment argmax_sentiment(const std::array<double, 3>& probs) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (probs[static_cast<std::size_t>(k)] > probs[static_cast<std::size_t>(best)]) {
      best = k;
    }
  }
  return class_at(best);
}

}  // namespace cmsa
