// Copyright 2026 The stepbid Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stepbid/payoff.hpp"

namespace stepbid {

std::string to_string(BidFormat format) {
  switch (format) {
    case BidFormat::kSimple:
      return "simple";
    case BidFormat::kBlock:
      return "block";
    case BidFormat::kMultipart:
      return "multipart";
  }
  return "unknown";
}

BidFormat parse_format(const std::string& name) {
  if (name == "simple") return BidFormat::kSimple;
  if (name == "block") return BidFormat::kBlock;
  if (name == "multipart") return BidFormat::kMultipart;
  throw std::invalid_argument("unknown bid format '" + name + "'");
}

BidFormat format_of(const Bid& bid) {
  return static_cast<BidFormat>(bid.index());
}

}  // namespace stepbid
