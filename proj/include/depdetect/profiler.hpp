#pragma once

#include <string>
#include <vector>

#include "depdetect/corpus.hpp"

namespace dd {

struct ProfileResult {
  std::string user_id;
  std::size_t n_tweets = 0;
  std::size_t n_depressive = 0;
  double fraction = 0.0;
  double threshold = 0.75;
  bool flagged = false;  // fraction strictly above threshold
};

// The red-flag rule over per-tweet predictions. Empty predictions or a
// threshold outside (0,1) raise Error(profile).
ProfileResult profile_from_labels(std::string user_id,
                                  const std::vector<Label>& predictions,
                                  double threshold);

}  // namespace dd
