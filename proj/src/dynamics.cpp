#include "ar/dynamics.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace ar {

namespace {

constexpr std::array<std::pair<Builtin, std::string_view>, 6> kBuiltinNames{{
    {Builtin::Identity, "identity"},
    {Builtin::BitNot, "bit-not"},
    {Builtin::And, "and"},
    {Builtin::Xor, "xor"},
    {Builtin::RippleAdd, "ripple-add"},
    {Builtin::SwapPair, "swap-pair"},
}};

constexpr std::array<std::pair<Gate::Op, std::string_view>, 7> kGateNames{{
    {Gate::Op::Sense, "sense"},
    {Gate::Op::Not, "not"},
    {Gate::Op::And, "and"},
    {Gate::Op::Or, "or"},
    {Gate::Op::Xor, "xor"},
    {Gate::Op::Majority, "majority"},
    {Gate::Op::Constant, "constant"},
}};

[[noreturn]] void bad(const std::string& id, const std::string& what)
{
    fail(ErrorCode::InvalidDeclaration, "dynamics '" + id + "': " + what);
}

bool is_bits(const AbstractSpace& s, std::size_t width)
{
    return s.kind() == SpaceKind::Bitstring && s.width() == width;
}

void check_builtin_space(const std::string& id, const AbstractSpace& space, Builtin kind)
{
    auto mismatch = [&](const std::string& expected) {
        fail(ErrorCode::SpaceMismatch, "builtin " + std::string(to_string(kind)) + " in '" + id +
                                           "' needs " + expected + ", got space '" + space.id() + "'");
    };
    switch (kind) {
    case Builtin::Identity: return;
    case Builtin::BitNot:
        if (space.kind() != SpaceKind::Bitstring) {
            mismatch("a bitstring space");
        }
        return;
    case Builtin::And:
    case Builtin::Xor:
        if (space.kind() != SpaceKind::Tuple || space.arity() != 2 ||
            space.component(0).kind() != SpaceKind::Bitstring ||
            !is_bits(space.component(1), space.component(0).width())) {
            mismatch("a (bits w, bits w) tuple");
        }
        return;
    case Builtin::RippleAdd:
        if (space.kind() != SpaceKind::Tuple || space.arity() != 3 ||
            space.component(0).kind() != SpaceKind::Bitstring ||
            !is_bits(space.component(1), space.component(0).width()) ||
            !is_bits(space.component(2), space.component(0).width() + 1) ||
            space.component(0).width() > 62) {
            mismatch("a (bits w, bits w, bits w+1) tuple");
        }
        return;
    case Builtin::SwapPair:
        if (space.kind() != SpaceKind::Tuple || space.arity() != 2 ||
            !(space.component(0) == space.component(1))) {
            mismatch("a pair of identical component spaces");
        }
        return;
    }
}

std::string complement(const std::string& digits)
{
    std::string out = digits;
    for (auto& c : out) {
        c = c == '1' ? '0' : '1';
    }
    return out;
}

std::string bitwise(const std::string& a, const std::string& b, bool is_xor)
{
    std::string out(a.size(), '0');
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool x = a[i] == '1';
        const bool y = b[i] == '1';
        out[i] = (is_xor ? (x != y) : (x && y)) ? '1' : '0';
    }
    return out;
}

// Gate-level ripple-carry adder over MSB-first bitstrings.
std::string ripple_add(const std::string& a, const std::string& b)
{
    const std::size_t w = a.size();
    std::string sum(w + 1, '0');
    bool carry = false;
    for (std::size_t i = 0; i < w; ++i) {
        const bool x = a[w - 1 - i] == '1';
        const bool y = b[w - 1 - i] == '1';
        sum[w - i] = (x != y) != carry ? '1' : '0';
        carry = (x && y) || (carry && (x != y));
    }
    sum[0] = carry ? '1' : '0';
    return sum;
}

void check_table(const std::string& id, const std::map<Value, Value>& table,
                 const auto& space)
{
    if (!space.finite()) {
        bad(id, "lookup tables need a finite space, '" + space.id() + "' is continuous");
    }
    if (*space.cardinality() > kEnumerationLimit) {
        fail(ErrorCode::TooLarge, "dynamics '" + id + "': space too large for a lookup table");
    }
    for (const auto& [k, v] : table) {
        if (!space.has_member(k)) {
            bad(id, "table key " + format_literal(k) + " is outside space '" + space.id() + "'");
        }
        if (!space.has_member(v)) {
            bad(id, "table image " + format_literal(v) + " is outside space '" + space.id() + "'");
        }
    }
    if (table.size() != *space.cardinality()) {
        for (const auto& s : enumerate(space)) {
            if (!table.contains(s.value)) {
                bad(id, "table is not total, missing " + format_literal(s.value));
            }
        }
    }
}

void collect_leaves(const SpaceData& s, std::vector<const SpaceData*>& out)
{
    if (const auto* rv = std::get_if<kinds::RealVector>(&s.kind)) {
        for (std::size_t i = 0; i < rv->lo.size(); ++i) {
            out.push_back(&s);
        }
    } else if (const auto* t = std::get_if<kinds::Tuple>(&s.kind)) {
        for (const auto& c : t->components) {
            collect_leaves(*c, out);
        }
    } else {
        out.push_back(&s);
    }
}

std::vector<const SpaceData*> leaves(const PhysicalSpace& space)
{
    std::vector<const SpaceData*> out;
    collect_leaves(space.data(), out);
    return out;
}

void check_noise(const std::string& id, const PhysicalSpace& space, const Noise& noise)
{
    if (!noise.active() && noise.thresholds.empty() && noise.partners.empty()) {
        return;
    }
    const auto ls = leaves(space);
    if (!noise.flip_probability.empty() && noise.flip_probability.size() != ls.size()) {
        bad(id, "noise declares " + std::to_string(noise.flip_probability.size()) +
                    " flip probabilities for " + std::to_string(ls.size()) + " coordinates");
    }
    if (!noise.thresholds.empty() && noise.thresholds.size() != ls.size()) {
        bad(id, "noise thresholds must cover every coordinate");
    }
    for (std::size_t i = 0; i < noise.flip_probability.size(); ++i) {
        const double p = noise.flip_probability[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            bad(id, "flip probability outside [0,1] at coordinate " + std::to_string(i));
        }
        if (p == 0.0) {
            continue;
        }
        if (const auto* lab = std::get_if<kinds::Labeled>(&ls[i]->kind)) {
            for (const auto& l : lab->labels) {
                auto it = noise.partners.find(l);
                if (it == noise.partners.end()) {
                    bad(id, "noisy label '" + l + "' has no noise partner");
                }
                if (std::find(lab->labels.begin(), lab->labels.end(), it->second) ==
                    lab->labels.end()) {
                    bad(id, "noise partner '" + it->second + "' is not a label of '" + ls[i]->id + "'");
                }
            }
        }
    }
}

void check_netlist(const std::string& id, const PhysicalSpace& space, const Netlist& net)
{
    if (space.kind() != SpaceKind::RealVector) {
        bad(id, "coordinate updates need a real-vector space");
    }
    const std::size_t dim = space.dimension();
    for (std::size_t w = 0; w < net.wires.size(); ++w) {
        const Gate& g = net.wires[w];
        for (std::size_t in : g.inputs) {
            if (in >= w) {
                bad(id, "wire " + std::to_string(w) + " reads a later wire");
            }
        }
        const std::size_t n = g.inputs.size();
        switch (g.op) {
        case Gate::Op::Sense:
            if (g.line >= dim || n != 0) {
                bad(id, "sense wire " + std::to_string(w) + " is malformed");
            }
            break;
        case Gate::Op::Not:
            if (n != 1) {
                bad(id, "not wire " + std::to_string(w) + " needs one input");
            }
            break;
        case Gate::Op::Majority:
            if (n == 0 || n % 2 == 0) {
                bad(id, "majority wire " + std::to_string(w) + " needs an odd input count");
            }
            break;
        case Gate::Op::Constant:
            if (n != 0) {
                bad(id, "constant wire " + std::to_string(w) + " takes no inputs");
            }
            break;
        default:
            if (n == 0) {
                bad(id, "wire " + std::to_string(w) + " has no inputs");
            }
        }
    }
    for (const Drive& d : net.drives) {
        if (d.line >= dim || d.wire >= net.wires.size()) {
            bad(id, "drive references a missing line or wire");
        }
    }
}

Value run_netlist(const Netlist& net, const PhysicalSpace& space, const Value& v)
{
    const auto& in = v.reals();
    std::vector<char> wire(net.wires.size(), 0);
    for (std::size_t w = 0; w < net.wires.size(); ++w) {
        const Gate& g = net.wires[w];
        bool out = false;
        switch (g.op) {
        case Gate::Op::Sense: out = in[g.line] >= g.threshold; break;
        case Gate::Op::Not: out = !wire[g.inputs[0]]; break;
        case Gate::Op::And:
            out = std::all_of(g.inputs.begin(), g.inputs.end(), [&](auto i) { return wire[i] != 0; });
            break;
        case Gate::Op::Or:
            out = std::any_of(g.inputs.begin(), g.inputs.end(), [&](auto i) { return wire[i] != 0; });
            break;
        case Gate::Op::Xor:
            for (auto i : g.inputs) {
                out = out != (wire[i] != 0);
            }
            break;
        case Gate::Op::Majority: {
            std::size_t ones = 0;
            for (auto i : g.inputs) {
                ones += wire[i] != 0;
            }
            out = 2 * ones > g.inputs.size();
            break;
        }
        case Gate::Op::Constant: out = g.constant; break;
        }
        wire[w] = out;
    }
    RealVector next = in;
    for (const Drive& d : net.drives) {
        next[d.line] = wire[d.wire] ? space.upper_bounds()[d.line] : space.lower_bounds()[d.line];
    }
    return Value(std::move(next));
}

class NoiseApplier {
public:
    NoiseApplier(const Noise& noise, TrialSeed seed) : noise_(noise), engine_(seed.value) {}

    Value apply(const SpaceData& s, const Value& v)
    {
        if (const auto* rv = std::get_if<kinds::RealVector>(&s.kind)) {
            RealVector xs = v.reals();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const std::size_t leaf = next_++;
                if (draw(leaf)) {
                    const double theta = noise_.thresholds.empty()
                                             ? 0.5 * (rv->lo[i] + rv->hi[i])
                                             : noise_.thresholds[leaf];
                    xs[i] = xs[i] >= theta ? rv->lo[i] : rv->hi[i];
                }
            }
            return Value(std::move(xs));
        }
        if (const auto* t = std::get_if<kinds::Tuple>(&s.kind)) {
            Value::Tuple items;
            for (std::size_t i = 0; i < t->components.size(); ++i) {
                items.push_back(apply(*t->components[i], v.tuple()[i]));
            }
            return Value(std::move(items));
        }
        const std::size_t leaf = next_++;
        if (v.is_label() && draw(leaf)) {
            return Value(Label{noise_.partners.at(v.label().name)});
        }
        return v;
    }

private:
    // One draw per coordinate, in coordinate order, whatever the probability.
    bool draw(std::size_t leaf)
    {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double p = leaf < noise_.flip_probability.size() ? noise_.flip_probability[leaf] : 0.0;
        return u < p;
    }

    const Noise& noise_;
    std::mt19937_64 engine_;
    std::size_t next_ = 0;
};

}  // namespace

TrialSeed derive_seed(TrialSeed base, std::uint64_t k)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base.value), static_cast<std::uint32_t>(base.value >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return TrialSeed{(static_cast<std::uint64_t>(words[0]) << 32) | words[1]};
}

std::string_view to_string(Builtin b)
{
    for (const auto& [k, name] : kBuiltinNames) {
        if (k == b) {
            return name;
        }
    }
    return "?";
}

std::optional<Builtin> builtin_from_string(std::string_view name)
{
    for (const auto& [k, n] : kBuiltinNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Gate::Op op)
{
    for (const auto& [k, name] : kGateNames) {
        if (k == op) {
            return name;
        }
    }
    return "?";
}

std::optional<Gate::Op> gate_op_from_string(std::string_view name)
{
    for (const auto& [k, n] : kGateNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool Noise::active() const
{
    return std::any_of(flip_probability.begin(), flip_probability.end(),
                       [](double p) { return p > 0.0; });
}

std::size_t leaf_count(const PhysicalSpace& space) { return leaves(space).size(); }

// ---------------------------------------------------------------------------
// AbstractDynamics

AbstractDynamics AbstractDynamics::lookup(std::string id, AbstractSpace space, Table table)
{
    if (!is_identifier(id)) {
        bad(id, "invalid identifier");
    }
    check_table(id, table, space);
    return AbstractDynamics(std::make_shared<const Data>(
        Data{std::move(id), std::move(space), Rule::Lookup, std::move(table), Builtin::Identity, {}}));
}

AbstractDynamics AbstractDynamics::builtin(std::string id, AbstractSpace space, Builtin kind)
{
    if (!is_identifier(id)) {
        bad(id, "invalid identifier");
    }
    check_builtin_space(id, space, kind);
    return AbstractDynamics(
        std::make_shared<const Data>(Data{std::move(id), std::move(space), Rule::Builtin, {}, kind, {}}));
}

AbstractDynamics AbstractDynamics::chain(std::string id, std::vector<AbstractDynamics> steps)
{
    if (!is_identifier(id)) {
        bad(id, "invalid identifier");
    }
    if (steps.empty()) {
        bad(id, "a chain needs at least one step");
    }
    for (const auto& s : steps) {
        if (!(s.space() == steps.front().space())) {
            fail(ErrorCode::SpaceMismatch, "chain '" + id + "' mixes spaces '" +
                                               steps.front().space().id() + "' and '" + s.space().id() + "'");
        }
    }
    AbstractSpace space = steps.front().space();
    return AbstractDynamics(std::make_shared<const Data>(
        Data{std::move(id), std::move(space), Rule::Chain, {}, Builtin::Identity, std::move(steps)}));
}

Value AbstractDynamics::apply(const Value& v) const
{
    switch (data_->rule) {
    case Rule::Lookup: return data_->table.at(v);
    case Rule::Chain: {
        Value cur = v;
        for (const auto& s : data_->steps) {
            cur = s.apply(cur);
        }
        return cur;
    }
    case Rule::Builtin: break;
    }
    switch (data_->builtin) {
    case Builtin::Identity: return v;
    case Builtin::BitNot: return Value(Bits{complement(v.bits().digits)});
    case Builtin::And:
    case Builtin::Xor: {
        const auto& t = v.tuple();
        return Value(Value::Tuple{
            Value(Bits{bitwise(t[0].bits().digits, t[1].bits().digits, data_->builtin == Builtin::Xor)}),
            t[1]});
    }
    case Builtin::RippleAdd: {
        const auto& t = v.tuple();
        return Value(Value::Tuple{t[0], t[1], Value(Bits{ripple_add(t[0].bits().digits, t[1].bits().digits)})});
    }
    case Builtin::SwapPair: {
        const auto& t = v.tuple();
        return Value(Value::Tuple{t[1], t[0]});
    }
    }
    return v;
}

bool operator==(const AbstractDynamics& a, const AbstractDynamics& b)
{
    if (a.data_ == b.data_) {
        return true;
    }
    if (!a.data_ || !b.data_) {
        return false;
    }
    const auto& x = *a.data_;
    const auto& y = *b.data_;
    return x.id == y.id && x.space == y.space && x.rule == y.rule && x.table == y.table &&
           x.builtin == y.builtin && x.steps == y.steps;
}

// ---------------------------------------------------------------------------
// PhysicalDynamics

PhysicalDynamics PhysicalDynamics::make(Data d)
{
    if (!is_identifier(d.id)) {
        bad(d.id, "invalid identifier");
    }
    check_noise(d.id, d.space, d.noise);
    return PhysicalDynamics(std::make_shared<const Data>(std::move(d)));
}

PhysicalDynamics PhysicalDynamics::lookup(std::string id, PhysicalSpace space, Table table, Noise noise)
{
    check_table(id, table, space);
    return make(Data{std::move(id), std::move(space), Rule::Lookup, std::move(table), {}, {}, std::move(noise)});
}

PhysicalDynamics PhysicalDynamics::coordinate_update(std::string id, PhysicalSpace space, Netlist netlist,
                                                     Noise noise)
{
    check_netlist(id, space, netlist);
    return make(
        Data{std::move(id), std::move(space), Rule::CoordinateUpdate, {}, std::move(netlist), {}, std::move(noise)});
}

PhysicalDynamics PhysicalDynamics::chain(std::string id, std::vector<PhysicalDynamics> steps, Noise noise)
{
    if (steps.empty()) {
        bad(id, "a chain needs at least one step");
    }
    for (const auto& s : steps) {
        if (!(s.space() == steps.front().space())) {
            fail(ErrorCode::SpaceMismatch, "chain '" + id + "' mixes spaces '" +
                                               steps.front().space().id() + "' and '" + s.space().id() + "'");
        }
    }
    PhysicalSpace space = steps.front().space();
    return make(Data{std::move(id), std::move(space), Rule::Chain, {}, {}, std::move(steps), std::move(noise)});
}

PhysicalDynamics PhysicalDynamics::identity(std::string id, PhysicalSpace space)
{
    if (space.kind() == SpaceKind::RealVector) {
        return coordinate_update(std::move(id), std::move(space), Netlist{});
    }
    Table table;
    for (const auto& s : enumerate(space)) {
        table.emplace(s.value, s.value);
    }
    return lookup(std::move(id), std::move(space), std::move(table));
}

bool PhysicalDynamics::stochastic() const
{
    if (data_->noise.active()) {
        return true;
    }
    return std::any_of(data_->steps.begin(), data_->steps.end(), [](const auto& s) { return s.stochastic(); });
}

PhysicalDynamics PhysicalDynamics::with_noise(std::string id, Noise noise) const
{
    Data d = *data_;
    d.id = std::move(id);
    d.noise = std::move(noise);
    return make(std::move(d));
}

Value PhysicalDynamics::apply(const Value& v, TrialSeed seed) const
{
    Value out;
    switch (data_->rule) {
    case Rule::Lookup: out = data_->table.at(v); break;
    case Rule::CoordinateUpdate: out = run_netlist(data_->netlist, data_->space, v); break;
    case Rule::Chain: {
        out = v;
        for (std::size_t i = 0; i < data_->steps.size(); ++i) {
            out = data_->steps[i].apply(out, derive_seed(seed, i + 1));
        }
        break;
    }
    }
    if (data_->noise.active()) {
        NoiseApplier noise(data_->noise, seed);
        out = noise.apply(data_->space.data(), out);
    }
    return out;
}

bool operator==(const PhysicalDynamics& a, const PhysicalDynamics& b)
{
    if (a.data_ == b.data_) {
        return true;
    }
    if (!a.data_ || !b.data_) {
        return false;
    }
    const auto& x = *a.data_;
    const auto& y = *b.data_;
    return x.id == y.id && x.space == y.space && x.rule == y.rule && x.table == y.table &&
           x.netlist == y.netlist && x.steps == y.steps && x.noise == y.noise;
}

// ---------------------------------------------------------------------------

AbstractState evolve_abstract(const AbstractDynamics& c, const AbstractState& m)
{
    if (!contains(c.space(), m)) {
        fail(ErrorCode::OutOfDomain, format_state(m) + " is not in the space of dynamics '" + c.id() + "'");
    }
    return AbstractState{c.space(), c.apply(m.value)};
}

PhysicalState evolve_physical(const PhysicalDynamics& h, const PhysicalState& p, TrialSeed t)
{
    if (!contains(h.space(), p)) {
        fail(ErrorCode::OutOfDomain, format_state(p) + " is not in the space of dynamics '" + h.id() + "'");
    }
    return PhysicalState{h.space(), h.apply(p.value, t)};
}

AbstractDynamics compose_dynamics(const AbstractDynamics& first, const AbstractDynamics& second, std::string id)
{
    if (!(first.space() == second.space())) {
        fail(ErrorCode::SpaceMismatch, "cannot compose '" + first.id() + "' on '" + first.space().id() +
                                           "' with '" + second.id() + "' on '" + second.space().id() + "'");
    }
    if (id.empty()) {
        id = first.id() + "-then-" + second.id();
    }
    return AbstractDynamics::chain(std::move(id), {first, second});
}

}  // namespace ar
