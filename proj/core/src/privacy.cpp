#include "lcm/privacy.hpp"

#include <algorithm>
#include <map>

#include "lcm/lagrange.hpp"

namespace lcm {

namespace {

void append_symbols(std::string& key, const FieldVec& v) {
  for (uint64_t x : v)
    key.append(reinterpret_cast<const char*>(&x), sizeof(x));
}

// Mixed-radix counter over `digits` base-q symbols.
struct Counter {
  std::vector<uint64_t> digits;
  uint64_t q;

  explicit Counter(size_t n, uint64_t q_) : digits(n, 0), q(q_) {}

  bool advance() {
    for (auto& d : digits) {
      if (++d < q) return true;
      d = 0;
    }
    return false;
  }
};

uint64_t checked_pow(uint64_t base, uint64_t exp, uint64_t budget) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    if (r > budget / base)
      throw too_large_to_enumerate("world count exceeds enumeration budget");
    r *= base;
  }
  return r;
}

// Shared per-oracle context: protocol structure fixed, only the
// enumerated symbols vary.
struct OracleContext {
  const Params& params;
  Field field;
  Grouping grouping;
  EvalPoints pts;
  std::vector<std::vector<uint64_t>> rows;  // coeff row per group
  size_t p;     // symbols per gradient
  size_t k;
  size_t clen;
  size_t n_pairs;

  explicit OracleContext(const Params& prm)
      : params(prm),
        field(prm.prime),
        grouping(make_groups(prm.num_servers, prm.group_size)),
        pts(EvalPoints::canonical(prm.code_degree(), prm.num_groups(),
                                  field)),
        p(prm.grad_len),
        k(static_cast<size_t>(prm.recovery_dim())),
        clen(prm.chunk_len()) {
    validate_params(prm);
    if (prm.padded_len() != p)
      throw chunking_error("oracle requires k | p");
    n_pairs = static_cast<size_t>(prm.num_clients) *
              (prm.num_clients - 1) / 2;
    for (int g = 0; g < prm.num_groups(); ++g)
      rows.push_back(coeff_row(field, pts.alphas[g], pts.betas));
  }

  size_t pair_index(int i, int j) const {  // i < j
    size_t idx = 0;
    for (int a = 0; a < i; ++a)
      idx += static_cast<size_t>(params.num_clients - 1 - a);
    return idx + static_cast<size_t>(j - i - 1);
  }

  // Masked gradient symbol t of client i under the given assignment.
  uint64_t masked_symbol(const std::vector<uint64_t>& grads,
                         const std::vector<uint64_t>& masks, int i,
                         size_t t) const {
    uint64_t y = grads[static_cast<size_t>(i) * p + t];
    if (!masks.empty()) {
      for (int j = 0; j < params.num_clients; ++j) {
        if (j == i) continue;
        size_t m = (i < j ? pair_index(i, j) : pair_index(j, i)) * p + t;
        y = i < j ? field.add(y, masks[m]) : field.sub(y, masks[m]);
      }
    }
    return y;
  }

  // u_i(alpha_g), one chunk coordinate at a time.
  FieldVec share(const std::vector<uint64_t>& grads,
                 const std::vector<uint64_t>& masks,
                 const std::vector<uint64_t>& noise, int i, int g) const {
    const auto& row = rows[g];
    FieldVec out(clen, 0);
    for (size_t t = 0; t < clen; ++t) {
      uint64_t acc = 0;
      for (size_t r = 0; r < k; ++r)
        acc = field.add(
            acc, field.mul(row[r],
                           masked_symbol(grads, masks, i, r * clen + t)));
      for (int z = 0; z < params.server_collusion; ++z) {
        size_t idx = (static_cast<size_t>(i) * params.server_collusion + z) *
                         clen +
                     t;
        acc = field.add(acc, field.mul(row[k + z], noise[idx]));
      }
      out[t] = acc;
    }
    return out;
  }
};

}  // namespace

AdversaryView collusion_view(const Transcript& tr, bool servers,
                             const std::vector<int>& colluders,
                             const std::vector<ClientSecret>* secrets,
                             bool enforce_threshold) {
  AdversaryView view;
  view.servers = servers;
  view.colluders = colluders;
  if (enforce_threshold) {
    int limit = servers ? tr.params.server_collusion
                        : tr.params.client_collusion;
    if (static_cast<int>(colluders.size()) > limit)
      throw threshold_exceeded("colluder set exceeds threshold " +
                               std::to_string(limit));
  }
  if (servers) {
    for (int j : colluders)
      view.inboxes.emplace_back(j, tr.inboxes[j]);
    return view;
  }
  // Colluding clients reach servers per the failure table and can pull
  // everything those servers hold.
  for (int j = 0; j < tr.params.num_servers; ++j) {
    bool reachable = false;
    for (int i : colluders)
      if (tr.table.link(i, j)) reachable = true;
    if (reachable) view.inboxes.emplace_back(j, tr.inboxes[j]);
  }
  if (secrets)
    for (int i : colluders) view.secrets.push_back((*secrets)[i]);
  return view;
}

OracleResult mi_server_oracle(const Params& params,
                              const std::vector<int>& colluding_servers,
                              const FailureTable& table,
                              const OracleOptions& opts) {
  if (opts.enforce_threshold &&
      static_cast<int>(colluding_servers.size()) > params.server_collusion)
    throw threshold_exceeded("server colluder set exceeds T_h");

  OracleContext ctx(params);
  const uint64_t q = params.prime;
  const size_t e = params.num_clients;

  const uint64_t n_grad = checked_pow(q, e * ctx.p, opts.budget);
  const uint64_t n_mask =
      opts.disable_masks ? 1 : checked_pow(q, ctx.n_pairs * ctx.p, opts.budget);
  const uint64_t n_noise = checked_pow(
      q, e * params.server_collusion * ctx.clen, opts.budget);
  if (n_grad > opts.budget / std::max<uint64_t>(1, n_mask) ||
      n_grad * n_mask > opts.budget / std::max<uint64_t>(1, n_noise))
    throw too_large_to_enumerate("world count exceeds enumeration budget");

  // Colluders see only inboxes of non-dropped servers they control.
  struct InboxSlot {
    int server, group;
    std::vector<int> senders;
  };
  std::vector<InboxSlot> slots;
  for (int j : colluding_servers) {
    int g = ctx.grouping.group_of(j);
    if (g < 0) continue;
    InboxSlot slot{j, g, {}};
    for (size_t i = 0; i < e; ++i)
      if (table.link(static_cast<int>(i), j))
        slot.senders.push_back(static_cast<int>(i));
    slots.push_back(slot);
  }

  OracleResult res;
  std::vector<std::map<std::string, uint64_t>> counts(n_grad);

  Counter grad(e * ctx.p, q);
  uint64_t gi = 0;
  do {
    Counter mask(opts.disable_masks ? 0 : ctx.n_pairs * ctx.p, q);
    do {
      Counter noise(e * params.server_collusion * ctx.clen, q);
      do {
        std::string key;
        for (const auto& slot : slots)
          for (int i : slot.senders)
            append_symbols(key, ctx.share(grad.digits, mask.digits,
                                          noise.digits, i, slot.group));
        ++counts[gi][key];
        ++res.worlds;
      } while (noise.advance());
    } while (mask.advance());
    ++gi;
  } while (grad.advance());

  for (uint64_t g = 1; g < n_grad; ++g) {
    if (counts[g] != counts[0]) {
      res.verdict = Verdict::Dependent;
      res.witness = "view distribution differs between gradient tuples 0 and " +
                    std::to_string(g);
      return res;
    }
  }
  return res;
}

OracleResult mi_client_oracle(const Params& params,
                              const std::vector<int>& colluding_clients,
                              const FailureTable& table,
                              const OracleOptions& opts) {
  if (opts.enforce_threshold &&
      static_cast<int>(colluding_clients.size()) > params.client_collusion)
    throw threshold_exceeded("client colluder set exceeds T_c");

  OracleContext ctx(params);
  const uint64_t q = params.prime;
  const size_t e = params.num_clients;

  const uint64_t n_grad = checked_pow(q, e * ctx.p, opts.budget);
  const uint64_t n_mask =
      opts.disable_masks ? 1 : checked_pow(q, ctx.n_pairs * ctx.p, opts.budget);
  const uint64_t n_noise = checked_pow(
      q, e * params.server_collusion * ctx.clen, opts.budget);
  if (n_grad > opts.budget / std::max<uint64_t>(1, n_mask) ||
      n_grad * n_mask > opts.budget / std::max<uint64_t>(1, n_noise))
    throw too_large_to_enumerate("world count exceeds enumeration budget");

  std::vector<bool> colluding(e, false);
  for (int i : colluding_clients) colluding[i] = true;

  // Servers any colluder reaches; their whole inbox is in the view.
  struct InboxSlot {
    int server, group;
    std::vector<int> senders;
  };
  std::vector<InboxSlot> slots;
  for (int j = 0; j < params.num_servers; ++j) {
    bool reachable = false;
    for (int i : colluding_clients)
      if (table.link(i, j)) reachable = true;
    int g = ctx.grouping.group_of(j);
    if (!reachable || g < 0) continue;
    InboxSlot slot{j, g, {}};
    for (size_t i = 0; i < e; ++i)
      if (table.link(static_cast<int>(i), j))
        slot.senders.push_back(static_cast<int>(i));
    slots.push_back(slot);
  }

  // condition key (colluder gradients, aggregate) ->
  //   honest-gradient key -> view distribution
  std::map<std::string, std::map<std::string, std::map<std::string, uint64_t>>>
      buckets;

  OracleResult res;
  Counter grad(e * ctx.p, q);
  do {
    std::string cond_key, honest_key;
    for (size_t i = 0; i < e; ++i) {
      for (size_t t = 0; t < ctx.p; ++t) {
        uint64_t v = grad.digits[i * ctx.p + t];
        (colluding[i] ? cond_key : honest_key)
            .append(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
    for (size_t t = 0; t < ctx.p; ++t) {
      uint64_t sum = 0;
      for (size_t i = 0; i < e; ++i)
        sum = ctx.field.add(sum, grad.digits[i * ctx.p + t]);
      cond_key.append(reinterpret_cast<const char*>(&sum), sizeof(sum));
    }

    Counter mask(opts.disable_masks ? 0 : ctx.n_pairs * ctx.p, q);
    do {
      Counter noise(e * params.server_collusion * ctx.clen, q);
      do {
        std::string view;
        for (const auto& slot : slots)
          for (int i : slot.senders)
            append_symbols(view, ctx.share(grad.digits, mask.digits,
                                           noise.digits, i, slot.group));
        // Colluders' own randomness: their pair masks and noise vectors.
        for (int i : colluding_clients) {
          if (!opts.disable_masks) {
            for (size_t j = 0; j < e; ++j) {
              if (static_cast<int>(j) == i) continue;
              size_t pi = i < static_cast<int>(j)
                              ? ctx.pair_index(i, static_cast<int>(j))
                              : ctx.pair_index(static_cast<int>(j), i);
              for (size_t t = 0; t < ctx.p; ++t) {
                uint64_t v = mask.digits[pi * ctx.p + t];
                view.append(reinterpret_cast<const char*>(&v), sizeof(v));
              }
            }
          }
          for (int z = 0; z < params.server_collusion; ++z)
            for (size_t t = 0; t < ctx.clen; ++t) {
              uint64_t v = noise.digits[(static_cast<size_t>(i) *
                                             params.server_collusion +
                                         z) *
                                            ctx.clen +
                                        t];
              view.append(reinterpret_cast<const char*>(&v), sizeof(v));
            }
        }
        ++buckets[cond_key][honest_key][view];
        ++res.worlds;
      } while (noise.advance());
    } while (mask.advance());
  } while (grad.advance());

  for (const auto& [cond, by_honest] : buckets) {
    const auto& first = by_honest.begin()->second;
    for (auto it = std::next(by_honest.begin()); it != by_honest.end();
         ++it) {
      if (it->second != first) {
        res.verdict = Verdict::Dependent;
        res.witness =
            "conditioned view distribution varies with honest gradients";
        return res;
      }
    }
  }
  return res;
}

std::optional<std::vector<int>> ub_invertibility_sweep(const Params& params) {
  validate_params(params);
  const int t_h = params.server_collusion;
  if (t_h == 0) return std::nullopt;
  Field f(params.prime);
  EvalPoints pts =
      EvalPoints::canonical(params.code_degree(), params.num_groups(), f);
  const int g = params.num_groups();

  std::vector<int> idx(t_h);
  for (int i = 0; i < t_h; ++i) idx[i] = i;
  while (true) {
    if (!is_invertible(f, ub_submatrix(f, idx, pts, params.recovery_dim())))
      return idx;
    int i = t_h - 1;
    while (i >= 0 && idx[i] == g - t_h + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < t_h; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::nullopt;
}

}  // namespace lcm
