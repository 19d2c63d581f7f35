#include "psskit/params.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "psskit/errors.hpp"

namespace psskit {
namespace {

struct Registry {
    std::shared_mutex mu;
    std::deque<ParamInfo> infos;
    std::unordered_map<std::string, ParamId> by_name;
    std::unordered_map<ParamId, ParamId> radical_by_base;
    std::atomic<std::size_t> generation{0};
};

Registry& registry() {
    static Registry r;
    return r;
}

const char* describe(const ParamInfo& p) {
    if (p.radical == RadicalKind::Shift) return "radical (shift)";
    if (p.radical == RadicalKind::Const) return "radical (constant)";
    switch (p.assumption) {
    case Assumption::Real: return "real";
    case Assumption::Nonzero: return "nonzero";
    case Assumption::Positive: return "positive";
    }
    return "?";
}

bool same_decl(const ParamInfo& a, const ParamInfo& b) {
    return a.assumption == b.assumption && a.radical == b.radical && a.base == b.base &&
           a.value == b.value;
}

ParamId insert(ParamInfo info) {
    auto& r = registry();
    std::unique_lock lock(r.mu);
    if (auto it = r.by_name.find(info.name); it != r.by_name.end()) {
        const ParamInfo& old = r.infos[it->second];
        if (!same_decl(old, info))
            throw RegistryError("parameter '" + info.name + "' already declared as " + describe(old));
        return it->second;
    }
    if (info.radical == RadicalKind::Shift) {
        if (auto it = r.radical_by_base.find(info.base); it != r.radical_by_base.end())
            throw RegistryError("parameter '" + r.infos[info.base].name +
                                "' already carries radical '" + r.infos[it->second].name + "'");
    }
    auto id = static_cast<ParamId>(r.infos.size());
    r.infos.push_back(info);
    r.by_name.emplace(info.name, id);
    if (info.radical == RadicalKind::Shift) r.radical_by_base.emplace(info.base, id);
    r.generation.fetch_add(1, std::memory_order_release);
    return id;
}

struct Snapshot {
    std::size_t generation = static_cast<std::size_t>(-1);
    std::vector<ParamInfo> infos;
    std::vector<std::int64_t> radical_by_base;
};

Snapshot& snapshot() {
    thread_local Snapshot snap;
    auto& r = registry();
    std::size_t g = r.generation.load(std::memory_order_acquire);
    if (snap.generation != g) {
        std::shared_lock lock(r.mu);
        snap.infos.assign(r.infos.begin(), r.infos.end());
        snap.radical_by_base.assign(snap.infos.size(), -1);
        for (auto [base, rad] : r.radical_by_base) snap.radical_by_base[base] = rad;
        snap.generation = r.generation.load(std::memory_order_acquire);
    }
    return snap;
}

}  // namespace

bool valid_param_name(const std::string& name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(name[0])) return false;
    for (char c : name)
        if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
    for (const char* f : {"exp", "sin", "cos", "sqrt", "pow"})
        if (name == f) return false;
    return true;
}

ParamId declare_param(const std::string& name, Assumption a) {
    if (!valid_param_name(name)) throw RegistryError("invalid parameter name '" + name + "'");
    ParamInfo info;
    info.name = name;
    info.assumption = a;
    return insert(std::move(info));
}

ParamId declare_radical_shift(const std::string& name, ParamId base, const Rational& k) {
    if (!valid_param_name(name)) throw RegistryError("invalid parameter name '" + name + "'");
    ParamInfo b = param_info(base);
    if (b.radical != RadicalKind::None)
        throw RegistryError("radical base '" + b.name + "' must be a plain parameter");
    if (k <= 0) throw RegistryError("radical shift constant must be positive");
    ParamInfo info;
    info.name = name;
    info.assumption = Assumption::Positive;
    info.radical = RadicalKind::Shift;
    info.base = base;
    info.value = k;
    return insert(std::move(info));
}

ParamId declare_radical_const(const std::string& name, const Rational& c) {
    if (!valid_param_name(name)) throw RegistryError("invalid parameter name '" + name + "'");
    if (c == 0) throw RegistryError("radical of zero");
    ParamInfo info;
    info.name = name;
    info.assumption = c > 0 ? Assumption::Positive : Assumption::Nonzero;
    info.radical = RadicalKind::Const;
    info.value = c;
    return insert(std::move(info));
}

std::optional<ParamId> find_param(const std::string& name) {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    auto it = r.by_name.find(name);
    if (it == r.by_name.end()) return std::nullopt;
    return it->second;
}

ParamInfo param_info(ParamId id) {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    if (id >= r.infos.size()) throw RegistryError("unknown parameter id " + std::to_string(id));
    return r.infos[id];
}

const std::string& param_name(ParamId id) {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    if (id >= r.infos.size()) throw RegistryError("unknown parameter id " + std::to_string(id));
    // deque elements never move and are never erased
    return r.infos[id].name;
}

std::optional<ParamId> radical_of_base(ParamId base) {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    auto it = r.radical_by_base.find(base);
    if (it == r.radical_by_base.end()) return std::nullopt;
    return it->second;
}

const ParamInfo& param_info_fast(ParamId id) {
    auto& snap = snapshot();
    if (id >= snap.infos.size()) throw RegistryError("unknown parameter id " + std::to_string(id));
    return snap.infos[id];
}

const ParamInfo* radical_info_of_base_fast(ParamId base, ParamId* radical_id) {
    auto& snap = snapshot();
    if (base >= snap.radical_by_base.size() || snap.radical_by_base[base] < 0) return nullptr;
    auto rid = static_cast<ParamId>(snap.radical_by_base[base]);
    if (radical_id) *radical_id = rid;
    return &snap.infos[rid];
}

std::size_t param_count() {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    return r.infos.size();
}

}  // namespace psskit
