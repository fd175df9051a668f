#include "afc/ppo/checkpoint.hpp"

#include "afc/io_util.hpp"

namespace afc::ppo {

namespace {
constexpr char kMagic[4] = {'A', 'F', 'C', 'P'};
}

void save_checkpoint(const PpoLearner& learner, const std::filesystem::path& path) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32(buf, kCheckpointVersion);
  put_u32(buf, static_cast<std::uint32_t>(learner.policy().obs_dim()));
  put_u32(buf, static_cast<std::uint32_t>(learner.policy().hidden()));
  put_f64(buf, learner.policy().action_scale());

  const PpoConfig& c = learner.config();
  put_f64(buf, c.clip_epsilon);
  put_f64(buf, c.gamma);
  put_f64(buf, c.gae_lambda);
  put_f64(buf, c.learning_rate);
  put_u32(buf, static_cast<std::uint32_t>(c.epochs_per_update));
  put_u32(buf, static_cast<std::uint32_t>(c.minibatch_size));
  put_f64(buf, c.entropy_coefficient);
  put_f64(buf, c.value_coefficient);
  put_f64(buf, c.max_grad_norm);

  put_u64(buf, learner.episodes_trained());

  const std::vector<double> params = learner.flat_params();
  put_u64(buf, params.size());
  for (double p : params) put_f64(buf, p);

  const Adam& adam = learner.optimizer();
  put_u64(buf, adam.steps());
  for (double m : adam.m()) put_f64(buf, m);
  for (double v : adam.v()) put_f64(buf, v);

  write_binary_file(path, buf);
}

namespace {

struct Header {
  int obs_dim;
  int hidden;
  double action_scale;
  std::uint64_t episodes;
};

Header read_header(ByteReader& r, const std::filesystem::path& path) {
  if (r.size < 8) throw IoError("corrupt checkpoint (too short): " + path.string());
  const std::string magic = r.bytes(4, "magic");
  if (magic != std::string(kMagic, 4))
    throw IoError("corrupt checkpoint (bad magic): " + path.string());
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint version mismatch: file has " + std::to_string(version) +
                  ", expected " + std::to_string(kCheckpointVersion));
  }
  Header h;
  h.obs_dim = static_cast<int>(r.u32("obs_dim"));
  h.hidden = static_cast<int>(r.u32("hidden"));
  h.action_scale = r.f64("action_scale");
  // hyperparameter block: 3 f64, 2 u32, 3 f64
  for (int i = 0; i < 4; ++i) r.f64("hyper");
  r.u32("epochs");
  r.u32("minibatch");
  for (int i = 0; i < 3; ++i) r.f64("hyper");
  h.episodes = r.u64("episodes");
  return h;
}

}  // namespace

CheckpointInfo peek_checkpoint(const std::filesystem::path& path) {
  const auto buf = read_binary_file(path);
  ByteReader r{buf.data(), buf.size()};
  const Header h = read_header(r, path);
  return {h.obs_dim, h.hidden, h.episodes};
}

void load_checkpoint(PpoLearner& learner, const std::filesystem::path& path) {
  const auto buf = read_binary_file(path);
  ByteReader r{buf.data(), buf.size()};
  const Header h = read_header(r, path);

  if (h.obs_dim != learner.policy().obs_dim() || h.hidden != learner.policy().hidden()) {
    throw ConfigError("checkpoint topology mismatch: file is [" + std::to_string(h.obs_dim) +
                      ", " + std::to_string(h.hidden) + "], learner is [" +
                      std::to_string(learner.policy().obs_dim()) + ", " +
                      std::to_string(learner.policy().hidden()) + "]");
  }

  const std::uint64_t n = r.u64("param count");
  if (n != learner.param_count())
    throw IoError("corrupt checkpoint (parameter count mismatch): " + path.string());
  std::vector<double> params(n);
  for (auto& p : params) p = r.f64("param");

  const std::uint64_t t = r.u64("adam steps");
  std::vector<double> m(n), v(n);
  for (auto& x : m) x = r.f64("adam m");
  for (auto& x : v) x = r.f64("adam v");
  if (!r.exhausted())
    throw IoError("corrupt checkpoint (trailing bytes): " + path.string());

  learner.set_flat_params(params);
  learner.optimizer().restore(std::move(m), std::move(v), t);
  learner.set_episodes_trained(h.episodes);
}

}  // namespace afc::ppo
