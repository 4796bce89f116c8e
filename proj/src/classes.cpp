#include "mixer/classes.hpp"

#include <numeric>

#include "mixer/error.hpp"

namespace mixer {

ClassData conj_classes(const GroupTable& group) {
  const Index n = group.order();
  ClassData data;
  data.group_order = n;
  data.class_of.assign(n, 0xffffffffU);

  std::vector<std::pair<Index, Index>> conjugators;  // (s, s^-1)
  for (Index s : group.generators()) conjugators.emplace_back(s, group.inv(s));

  std::vector<Index> queue;
  for (Index start = 0; start < n; ++start) {
    if (data.class_of[start] != 0xffffffffU) continue;
    const auto cls = static_cast<std::uint32_t>(data.representatives.size());
    data.representatives.push_back(start);
    data.class_of[start] = cls;
    queue.assign(1, start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Index x = queue[head];
      for (auto [s, s_inv] : conjugators) {
        const Index y = group.mul(group.mul(s_inv, x), s);
        if (data.class_of[y] == 0xffffffffU) {
          data.class_of[y] = cls;
          queue.push_back(y);
        }
      }
    }
    data.sizes.push_back(queue.size());
  }

  const std::size_t k = data.sizes.size();
  data.member_offsets.assign(k + 1, 0);
  for (std::size_t j = 0; j < k; ++j) data.member_offsets[j + 1] = data.member_offsets[j] + data.sizes[j];
  data.members.resize(n);
  std::vector<std::size_t> fill(data.member_offsets.begin(), data.member_offsets.end() - 1);
  for (Index g = 0; g < n; ++g) data.members[fill[data.class_of[g]]++] = g;

  data.centralizer_orders.resize(k);
  data.element_orders.resize(k);
  data.inverse_class.resize(k);
  data.power_maps.resize(k);
  data.exponent = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (n % data.sizes[j] != 0) fail(Errc::internal, "class size does not divide the group order");
    data.centralizer_orders[j] = n / data.sizes[j];
    const Index rep = data.representatives[j];
    auto& pm = data.power_maps[j];
    pm.push_back(0);
    for (Index x = rep; x != 0; x = group.mul(x, rep)) pm.push_back(data.class_of[x]);
    data.element_orders[j] = static_cast<std::uint32_t>(pm.size());
    data.inverse_class[j] = data.class_of[group.inv(rep)];
    data.exponent = std::lcm(data.exponent, static_cast<std::uint64_t>(pm.size()));
  }
  return data;
}

}  // namespace mixer
