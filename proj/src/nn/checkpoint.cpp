#include "dynlearn/nn/checkpoint.hpp"

#include <json.hpp>

#include "dynlearn/support/csv.hpp"
#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/hash.hpp"

namespace dynlearn {
namespace {

using nlohmann::json;

json dense_to_json(const double* data, long long size) {
  json a = json::array();
  for (long long i = 0; i < size; ++i) a.push_back(data[i]);
  return a;
}

template <class Vec>
json vec_to_json(const Vec& v) {
  return dense_to_json(v.data(), v.size());
}

template <class Vec>
void vec_from_json(const json& a, Vec& v) {
  if (static_cast<long long>(a.size()) != v.size())
    throw IoError("checkpoint normalizer has wrong channel count");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = a[static_cast<std::size_t>(i)].get<double>();
}

json norm_to_json(const Normalizer& n) {
  json j;
  j["x_mean"] = vec_to_json(n.x_mean);
  j["x_std"] = vec_to_json(n.x_std);
  j["x_min"] = vec_to_json(n.x_min);
  j["x_max"] = vec_to_json(n.x_max);
  j["y_mean"] = vec_to_json(n.y_mean);
  j["y_std"] = vec_to_json(n.y_std);
  j["u_mean"] = vec_to_json(n.u_mean);
  j["u_std"] = vec_to_json(n.u_std);
  return j;
}

Normalizer norm_from_json(const json& j) {
  Normalizer n;
  vec_from_json(j.at("x_mean"), n.x_mean);
  vec_from_json(j.at("x_std"), n.x_std);
  vec_from_json(j.at("x_min"), n.x_min);
  vec_from_json(j.at("x_max"), n.x_max);
  vec_from_json(j.at("y_mean"), n.y_mean);
  vec_from_json(j.at("y_std"), n.y_std);
  vec_from_json(j.at("u_mean"), n.u_mean);
  vec_from_json(j.at("u_std"), n.u_std);
  return n;
}

json checkpoint_json(Net& net, const Normalizer& norm,
                     const std::string& dataset_hash,
                     const std::string& config_hash, const std::string& id) {
  json j;
  j["kind"] = net.kind();
  j["hidden"] = net.hidden();
  j["activation"] = to_string(net.activation());
  json tensors = json::array();
  net.visit([&](const TensorRef& t) {
    json tj;
    tj["name"] = t.name;
    tj["rows"] = t.rows;
    tj["cols"] = t.cols;
    tj["data"] = dense_to_json(t.data, t.size());
    tensors.push_back(tj);
  });
  j["tensors"] = tensors;
  j["normalizer"] = norm_to_json(norm);
  j["dataset_hash"] = dataset_hash;
  j["config_hash"] = config_hash;
  j["checkpoint_id"] = id;
  return j;
}

}  // namespace

std::string save_checkpoint(const std::filesystem::path& path, Net& net,
                            const Normalizer& norm,
                            const std::string& dataset_hash,
                            const std::string& config_hash) {
  const std::string id =
      hash_hex(checkpoint_json(net, norm, dataset_hash, config_hash, "").dump(2));
  write_text_file(
      path, checkpoint_json(net, norm, dataset_hash, config_hash, id).dump(2) + "\n");
  return id;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const json j = json::parse(read_text_file(path));
  Checkpoint cp;
  cp.net = make_net(j.at("kind").get<std::string>(), j.at("hidden").get<int>(),
                    activation_from_string(j.at("activation").get<std::string>()));
  const json& tensors = j.at("tensors");
  std::size_t idx = 0;
  cp.net->visit([&](const TensorRef& t) {
    if (idx >= tensors.size())
      throw IoError("checkpoint is missing parameter tensors");
    const json& tj = tensors[idx++];
    if (tj.at("name").get<std::string>() != t.name ||
        tj.at("rows").get<long long>() != t.rows ||
        tj.at("cols").get<long long>() != t.cols)
      throw IoError("checkpoint tensor layout mismatch at " + t.name);
    const json& data = tj.at("data");
    if (static_cast<long long>(data.size()) != t.size())
      throw IoError("checkpoint tensor size mismatch at " + t.name);
    for (long long i = 0; i < t.size(); ++i)
      t.data[i] = data[static_cast<std::size_t>(i)].get<double>();
  });
  if (idx != tensors.size()) throw IoError("checkpoint has extra tensors");

  cp.norm = norm_from_json(j.at("normalizer"));
  cp.dataset_hash = j.at("dataset_hash").get<std::string>();
  cp.config_hash = j.at("config_hash").get<std::string>();
  cp.checkpoint_id = j.at("checkpoint_id").get<std::string>();

  const std::string recomputed = hash_hex(
      checkpoint_json(*cp.net, cp.norm, cp.dataset_hash, cp.config_hash, "").dump(2));
  if (recomputed != cp.checkpoint_id)
    throw HashMismatchError("checkpoint id mismatch: stored " +
                            cp.checkpoint_id + ", recomputed " + recomputed);
  return cp;
}

}  // namespace dynlearn
