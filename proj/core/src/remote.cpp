#include "synthrec/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include "synthrec/errors.hpp"

namespace synthrec {

using nlohmann::json;

namespace {

void split_endpoint(const std::string& endpoint, std::string& host, int& port) {
  std::string rest = endpoint;
  if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
  while (!rest.empty() && rest.back() == '/') rest.pop_back();
  std::size_t colon = rest.rfind(':');
  if (colon == std::string::npos) {
    host = rest;
    port = 80;
    return;
  }
  host = rest.substr(0, colon);
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    throw DataError("invalid endpoint: " + endpoint);
  }
}

}  // namespace

std::vector<FillDistribution> remote_predict(
    const std::string& endpoint, const std::vector<std::string>& context,
    const std::vector<std::size_t>& mask_positions, std::size_t top_k,
    int timeout_seconds) {
  std::string host;
  int port;
  split_endpoint(endpoint, host, port);

  httplib::Client client(host, port);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);

  json req{{"context", context},
           {"mask_positions", mask_positions},
           {"top_k", top_k}};
  auto res = client.Post("/v1/fill", req.dump(), "application/json");
  if (!res) {
    auto err = httplib::to_string(res.error());
    if (res.error() == httplib::Error::ConnectionTimeout ||
        res.error() == httplib::Error::Read ||
        res.error() == httplib::Error::Write)
      throw TimeoutError("fill request to " + endpoint + " timed out (" + err + ")");
    throw TransportError("fill request to " + endpoint + " failed: " + err);
  }
  if (res->status != 200) {
    std::string detail = res->body;
    try {
      json ej = json::parse(res->body);
      if (ej.contains("error"))
        detail = ej["error"].value("code", "") + ": " +
                 ej["error"].value("message", "");
    } catch (const json::parse_error&) {
    }
    throw ProtocolError("fill endpoint returned status " +
                        std::to_string(res->status) + " (" + detail + ")");
  }

  json j;
  try {
    j = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("fill response is not valid JSON: ") +
                        e.what());
  }
  if (!j.contains("distributions") || !j["distributions"].is_array())
    throw ProtocolError("fill response missing distributions array");
  auto& dists_json = j["distributions"];
  if (dists_json.size() != mask_positions.size())
    throw ProtocolError("fill response has " + std::to_string(dists_json.size()) +
                        " distributions for " +
                        std::to_string(mask_positions.size()) + " positions");

  std::vector<FillDistribution> out;
  for (const auto& dj : dists_json) {
    if (!dj.is_array())
      throw ProtocolError("fill response distribution is not an array");
    FillDistribution dist;
    for (const auto& cj : dj) {
      if (!cj.contains("token") || !cj.contains("p"))
        throw ProtocolError("fill response candidate missing token or p field");
      dist.push_back({cj["token"].get<std::string>(), cj["p"].get<double>()});
    }
    validate_distribution(dist);  // throws ProtocolError on invariant breaks
    out.push_back(std::move(dist));
  }
  return out;
}

RemoteFillModel::RemoteFillModel(std::string endpoint, std::size_t window,
                                 int timeout_seconds)
    : window_(window), timeout_seconds_(timeout_seconds) {
  split_endpoint(endpoint, host_, port_);
}

std::vector<FillDistribution> RemoteFillModel::predict(
    const std::vector<std::string>& context,
    const std::vector<std::size_t>& mask_positions, std::size_t top_k) const {
  return remote_predict("http://" + host_ + ":" + std::to_string(port_), context,
                        mask_positions, top_k, timeout_seconds_);
}

}  // namespace synthrec
