#pragma once

#include <string>

#include "synthrec/mlm.hpp"

namespace synthrec {

// JSON-over-HTTP client for an external MLM backend. POST /v1/fill with
// {context, mask_positions, top_k}; expects {distributions: [[{token, p}]]}.
class RemoteFillModel : public FillModel {
 public:
  explicit RemoteFillModel(std::string endpoint, std::size_t window = 512,
                           int timeout_seconds = 30);

  std::vector<FillDistribution> predict(
      const std::vector<std::string>& context,
      const std::vector<std::size_t>& mask_positions,
      std::size_t top_k) const override;
  std::size_t window() const override { return window_; }

 private:
  std::string host_;
  int port_ = 80;
  std::size_t window_;
  int timeout_seconds_;
};

// One-shot request helper used by the client and by protocol tests.
std::vector<FillDistribution> remote_predict(
    const std::string& endpoint, const std::vector<std::string>& context,
    const std::vector<std::size_t>& mask_positions, std::size_t top_k,
    int timeout_seconds = 30);

}  // namespace synthrec
