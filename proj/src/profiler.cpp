#include "depdetect/profiler.hpp"

#include "depdetect/error.hpp"

namespace dd {

ProfileResult profile_from_labels(std::string user_id,
                                  const std::vector<Label>& predictions,
                                  double threshold) {
  if (predictions.empty())
    fail(Errc::profile, "profile needs at least one tweet");
  if (!(threshold > 0.0 && threshold < 1.0))
    fail(Errc::profile, "threshold must lie strictly between 0 and 1");

  ProfileResult r;
  r.user_id = std::move(user_id);
  r.n_tweets = predictions.size();
  for (Label l : predictions) r.n_depressive += l == Label::Depressive;
  r.fraction = static_cast<double>(r.n_depressive) /
               static_cast<double>(r.n_tweets);
  r.threshold = threshold;
  r.flagged = r.fraction > threshold;
  return r;
}

}  // namespace dd
