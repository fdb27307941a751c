#include "commands.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "chromo/building.hpp"
#include "chromo/congruence.hpp"
#include "chromo/greek.hpp"
#include "chromo/hermitian.hpp"
#include "chromo/hondatate.hpp"
#include "chromo/level1.hpp"
#include "chromo/newton.hpp"

namespace chromo::cli {

using nlohmann::json;

namespace {

std::string int_str(const Int& x)
{
    return x.get_str();
}

json val_json(const Valuation& v)
{
    if (v.infinite) return "inf";
    return v.value;
}

std::string pow_str(long p, long e)
{
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r.get_str();
}

long parse_place(const std::string& s)
{
    if (s == "inf" || s == "oo" || s == "0") return kInfinity;
    try {
        return std::stol(s);
    } catch (const std::exception&) {
        throw precondition_error("bad place '" + s + "'");
    }
}

std::string place_str(long v)
{
    return v == kInfinity ? "inf" : std::to_string(v);
}

std::vector<std::string> split(const std::string& s, char c)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, c)) out.push_back(cur);
    return out;
}

json rat_map(const std::map<std::string, Rat>& m)
{
    json j = json::object();
    for (auto& [k, v] : m) j[k] = rat_str(v);
    return j;
}

json breakpoints_json(const Rendering& r)
{
    json j = json::array();
    for (auto& [h, d] : r.breakpoints) j.push_back({h, d});
    return j;
}

std::string breakpoints_text(const Rendering& r)
{
    std::string s;
    for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
        if (i) s += ",";
        s += "(" + std::to_string(r.breakpoints[i].first) + "," + std::to_string(r.breakpoints[i].second) + ")";
    }
    return s;
}

std::string slopes_text(const NewtonPolygon& P)
{
    std::string s;
    for (auto& g : P.segs) {
        if (!s.empty()) s += ",";
        s += g.h == 1 ? std::to_string(g.d) : std::to_string(g.d) + "/" + std::to_string(g.h);
        if (g.mult > 1) s += "x" + std::to_string(g.mult);
    }
    return s;
}

json polygon_json(const NewtonPolygon& P)
{
    json segs = json::array();
    for (auto& g : P.segs) segs.push_back({{"d", g.d}, {"h", g.h}, {"mult", g.mult}});
    auto [h, d] = total(P);
    auto r = render_ascii(P);
    return {{"segments", segs},
            {"slopes", slopes_text(P)},
            {"height", h},
            {"dimension", d},
            {"breakpoints", breakpoints_json(r)},
            {"polarizable", is_polarizable(P)}};
}

std::string monomial_str(const Monomial& m)
{
    std::string s;
    auto add = [&](const char* name, int e) {
        if (e == 0) return;
        if (!s.empty()) s += "*";
        s += name;
        if (e != 1) s += "^" + std::to_string(e);
    };
    add("E4", m.a);
    add("E6", m.b);
    add("D", m.c);
    return s.empty() ? "1" : s;
}

json group_json(const CongruenceGroup& G)
{
    json mons = json::array();
    for (auto& m : G.monomials) mons.push_back(monomial_str(m));
    json gens = json::array();
    for (auto& g : G.generators) gens.push_back({{"coords", g.coords}, {"order_exp", g.order_exp}});
    return {{"monomials", mons},
            {"generators", gens},
            {"modulus", pow_str(G.p, G.k)},
            {"log_order", G.log_order},
            {"exponent_exp", G.exponent_exp},
            {"exponent", pow_str(G.p, G.exponent_exp)},
            {"work_prec", G.work_prec}};
}

int to_int(const std::string& s)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw precondition_error("not an integer: '" + s + "'");
}

// "E4^a*E6^b*D^c", c < 0 allowed
WeightedForm parse_form(const std::string& s, int prec)
{
    Monomial m;
    if (s != "1") {
        for (auto& tok : split(s, '*')) {
            auto hat = tok.find('^');
            std::string base = tok.substr(0, hat);
            int e = 1;
            if (hat != std::string::npos) {
                e = to_int(tok.substr(hat + 1));
            }
            if (base == "E4") m.a += e;
            else if (base == "E6") m.b += e;
            else if (base == "D") m.c += e;
            else throw precondition_error("unknown factor '" + base + "' (use E4, E6, D)");
        }
    }
    if (m.a < 0 || m.b < 0) throw precondition_error("negative Eisenstein exponent");
    int pole = m.c < 0 ? -m.c : 0;
    QSeries s1 = QSeries::constant(Rat(1), prec);
    if (m.a) s1 = s1 * eisenstein(4, prec).pow(m.a);
    if (m.b) s1 = s1 * eisenstein(6, prec).pow(m.b);
    if (m.c > 0) s1 = s1 * delta(prec).pow(m.c);
    return {4 * m.a + 6 * m.b + 12 * m.c, pole, s1};
}

Ext parse_ext(const std::string& s)
{
    if (s == "none") return Ext::None;
    if (s == "inert") return Ext::Inert;
    if (s == "ramified") return Ext::Ramified;
    throw precondition_error("ext must be none, inert or ramified");
}

PAdicType read_type(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
        PAdicType t;
        t.S.p = j.at("p").get<long>();
        t.S.degree = j.at("degree").get<long>();
        for (auto& pl : j.at("places")) {
            t.S.places.push_back({pl.at("id").get<std::string>(), pl.value("e", 1L), pl.value("f", 1L)});
        }
        for (auto& [k, v] : j.at("conj").items()) t.S.conj[k] = v.get<std::string>();
        if (j.contains("real_places")) t.S.real_places = j["real_places"].get<std::vector<std::string>>();
        for (auto& [k, v] : j.at("eta").items()) t.eta[k] = parse_rat(v.get<std::string>());
        return t;
    } catch (const json::exception& e) {
        throw precondition_error(std::string("malformed type file: ") + e.what());
    }
}

LocalFormClass parse_local(const QuadImagField& F, int n, const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos) throw precondition_error("local class must be place:value");
    long v = parse_place(s.substr(0, colon));
    std::string val = s.substr(colon + 1);
    LocalFormClass c;
    c.place = v;
    if (v == kInfinity) {
        auto pn = split(val, ',');
        if (pn.size() != 2) throw precondition_error("real class must be inf:pos,neg");
        c.kind = LocalFormClass::Kind::Signature;
        c.pos = to_int(pn[0]);
        c.neg = to_int(pn[1]);
    } else if (val == "split") {
        c.kind = LocalFormClass::Kind::Split;
    } else {
        c.kind = LocalFormClass::Kind::Nonsplit;
        c.cls = to_int(val);
    }
    (void)F;
    (void)n;
    return c;
}

json lattice_json(const Lattice& L)
{
    return L.key();
}

template <class F>
void leaf(CLI::App* sub, Dispatch& d, const std::string& name, F make)
{
    sub->callback([&d, name, make] {
        d.name = name;
        d.action = make;
    });
}

// ---- greek ----

void add_greek(CLI::App& app, const Globals&, Dispatch& d)
{
    auto* g = app.add_subcommand("greek", "Greek-letter element predicates");
    g->require_subcommand(1);

    struct A {
        long p = 5, t = 0;
        int j = 1;
    };
    auto a = std::make_shared<A>();
    auto* al = g->add_subcommand("alpha", "alpha_{i/j} existence");
    al->add_option("-p", a->p, "prime")->required();
    al->add_option("-t", a->t, "weight t")->required();
    al->add_option("-j", a->j, "order exponent")->required();
    leaf(al, d, "greek alpha", [a] {
        Result r;
        r.inputs = {{"p", a->p}, {"t", a->t}, {"j", a->j}};
        auto v = alpha_invariant_order(a->p, a->t, a->j);
        auto mx = alpha_max_j(a->p, a->t);
        r.outputs = {{"exists", v.exists}, {"max_j", val_json(mx)}};
        r.outputs["order"] = v.exists ? json(pow_str(a->p, v.j)) : json(nullptr);
        r.text = v.exists ? "exists, order " + pow_str(a->p, v.j) : "does not exist";
        return r;
    });

    struct B {
        long p = 5, i = 1, j = 1, k = 1;
    };
    auto b = std::make_shared<B>();
    auto* be = g->add_subcommand("beta", "beta_{i/j,k} predicate");
    be->add_option("-p", b->p, "prime")->required();
    be->add_option("-i", b->i, "i")->required();
    be->add_option("-j", b->j, "j")->required();
    be->add_option("-k", b->k, "k")->required();
    leaf(be, d, "greek beta", [b] {
        Result r;
        r.inputs = {{"p", b->p}, {"i", b->i}, {"j", b->j}, {"k", b->k}};
        auto v = beta_invariant_exists(b->p, b->i, b->j, b->k);
        r.outputs = {{"exists", v.exists},
                     {"t", v.t},
                     {"nu", v.nu},
                     {"nu_zero_ambiguity", v.nu_zero_ambiguity},
                     {"reason", v.reason}};
        r.outputs["m"] = v.m_found ? json(v.m) : json(nullptr);
        r.outputs["order"] = v.exists ? json(pow_str(b->p, b->k)) : json(nullptr);
        r.text = (v.exists ? "exists, order " + pow_str(b->p, b->k) : "does not exist") +
                 ", t = " + std::to_string(v.t);
        if (!v.reason.empty()) r.text += " (" + v.reason + ")";
        if (v.nu_zero_ambiguity) r.text += "\nnote: nu_p(i) = 0 case, see congruence B";
        return r;
    });
}

// ---- congruence ----

void add_congruence(CLI::App& app, const Globals& gl, Dispatch& d)
{
    auto* c = app.add_subcommand("congruence", "congruence groups and Serre's check");
    c->require_subcommand(1);

    struct A {
        long p = 5, l = 2;
        int t = 4, j = 1;
    };
    auto a = std::make_shared<A>();
    auto* ca = c->add_subcommand("A", "the group A_(t;j)");
    ca->add_option("-p", a->p, "prime")->required();
    ca->add_option("-l", a->l, "auxiliary prime")->default_val(2);
    ca->add_option("-t", a->t, "weight")->required();
    ca->add_option("-j", a->j, "modulus exponent")->required();
    leaf(ca, d, "congruence A", [a, &gl] {
        Result r;
        int prec = gl.prec ? gl.prec : sturm_bound(a->t, a->l, gl.mmax);
        r.inputs = {{"p", a->p}, {"l", a->l}, {"t", a->t}, {"j", a->j}, {"mmax", gl.mmax}, {"prec", prec}};
        auto G = compute_A(a->p, a->l, a->t, a->j, gl.mmax, prec);
        r.outputs = group_json(G);
        if (a->t >= 4) {
            QSeries num = eisenstein(a->t, G.work_prec);
            if (gl.mmax > 0) num = num * delta(G.work_prec).pow(gl.mmax);
            r.outputs["eisenstein_order_exp"] = member_order(G, num);
        }
        r.precision_used = G.work_prec;
        r.text = "|A| = " + pow_str(a->p, G.log_order) + ", exponent " + pow_str(a->p, G.exponent_exp) + ", " +
                 std::to_string(G.generators.size()) + " generator(s)";
        return r;
    });

    struct B {
        long p = 5, l = 2;
        int t = 24, j = 4, k = 1;
    };
    auto b = std::make_shared<B>();
    auto* cb = c->add_subcommand("B", "the group B_(t;j,k)");
    cb->add_option("-p", b->p, "prime")->required();
    cb->add_option("-l", b->l, "auxiliary prime")->default_val(2);
    cb->add_option("-t", b->t, "top weight")->required();
    cb->add_option("-j", b->j, "weight drop")->required();
    cb->add_option("-k", b->k, "modulus exponent")->required();
    leaf(cb, d, "congruence B", [b, &gl] {
        Result r;
        int prec = gl.prec ? gl.prec : sturm_bound(b->t, b->l, gl.mmax);
        WitnessSpace sp;
        if (gl.space == "old") sp = WitnessSpace::Old;
        else if (gl.space == "extended") sp = WitnessSpace::Extended;
        else throw precondition_error("space must be old or extended");
        r.inputs = {{"p", b->p}, {"l", b->l},       {"t", b->t},         {"j", b->j},
                    {"k", b->k}, {"mmax", gl.mmax}, {"prec", prec}, {"space", to_string(sp)}};
        auto G = compute_B(b->p, b->l, b->t, b->j, b->k, gl.mmax, prec, sp);
        r.outputs = group_json(G);
        r.outputs["verdict"] = to_string(G.verdict);
        r.precision_used = G.work_prec;
        r.text = to_string(G.verdict) + ", |B| = " + pow_str(b->p, G.log_order);
        return r;
    });

    struct S {
        long p = 5;
        int k = 1;
        std::string f1 = "1", f2 = "E4";
    };
    auto s = std::make_shared<S>();
    auto* cs = c->add_subcommand("serre", "check a congruence f1 = f2 mod p^k against the weights");
    cs->add_option("-p", s->p, "prime")->required();
    cs->add_option("-k", s->k, "modulus exponent")->required();
    cs->add_option("--f1", s->f1, "monomial like E4^2*D^-1")->required();
    cs->add_option("--f2", s->f2, "monomial")->required();
    leaf(cs, d, "congruence serre", [s, &gl] {
        Result r;
        int prec = gl.prec ? gl.prec : 50;
        r.inputs = {{"p", s->p}, {"k", s->k}, {"f1", s->f1}, {"f2", s->f2}, {"prec", prec}};
        auto a1 = parse_form(s->f1, prec), a2 = parse_form(s->f2, prec);
        auto res = serre_congruence_check(a1, a2, s->p, s->k);
        r.outputs = {{"result", to_string(res)}, {"weights", {a1.weight, a2.weight}}};
        r.precision_used = prec;
        r.text = to_string(res);
        return r;
    });
}

// ---- newton ----

void add_newton(CLI::App& app, const Globals&, Dispatch& d)
{
    auto slopes = std::make_shared<std::string>();
    auto* n = app.add_subcommand("newton", "Newton polygon of a list of slopes");
    n->add_option("--slopes", *slopes, "comma list, e.g. 1/3,1/2,1 or 1/2x3")->required();
    leaf(n, d, "newton", [slopes] {
        Result r;
        r.inputs = {{"slopes", *slopes}};
        auto P = parse_slopes(*slopes);
        r.outputs = polygon_json(P);
        r.outputs["dual"] = slopes_text(dual(P));
        r.outputs["notes"] = P.notes;
        auto R = render_ascii(P);
        r.outputs["grid"] = R.grid;
        auto [h, dim] = total(P);
        r.text = "breakpoints " + breakpoints_text(R) + "\nheight " + std::to_string(h) + ", dimension " +
                 std::to_string(dim) + (is_polarizable(P) ? ", polarizable" : ", not polarizable") + "\n" + R.grid;
        for (auto& note : P.notes) r.text += "note: " + note + "\n";
        if (!r.text.empty() && r.text.back() == '\n') r.text.pop_back();
        return r;
    });
}

// ---- hondatate ----

void add_hondatate(CLI::App& app, const Globals&, Dispatch& d)
{
    struct O {
        std::string file;
        long split_n = 0, p = 0;
    };
    auto o = std::make_shared<O>();
    auto* h = app.add_subcommand("hondatate", "invariants of a p-adic type");
    auto* f = h->add_option("--type", o->file, "JSON type file");
    auto* s = h->add_option("--split", o->split_n, "use the split type (1/n, (n-1)/n)");
    f->excludes(s);
    h->add_option("-p", o->p, "prime for --split");
    leaf(h, d, "hondatate", [o] {
        Result r;
        PAdicType t;
        if (!o->file.empty()) {
            t = read_type(o->file);
            r.inputs = {{"type", o->file}};
        } else if (o->split_n > 0) {
            if (o->p < 2) throw precondition_error("--split needs -p");
            t = split_type(o->p, o->split_n);
            r.inputs = {{"split", o->split_n}, {"p", o->p}};
        } else {
            throw precondition_error("give --type FILE or --split N -p P");
        }
        json viol = json::array();
        for (auto& v : validate_type(t)) viol.push_back({{"place", v.place}, {"what", v.what}});
        r.outputs["violations"] = viol;
        if (!viol.empty()) {
            r.text = "invalid type:";
            for (auto& v : viol) r.text += "\n  " + v["place"].get<std::string>() + ": " + v["what"].get<std::string>();
            return r;
        }
        auto inv = invariants_and_dimension(t);
        r.outputs["slopes"] = rat_map(slopes_of_type(t));
        r.outputs["inv"] = rat_map(inv.inv);
        r.outputs["m"] = int_str(inv.m);
        r.outputs["dim"] = rat_str(inv.dim);
        r.outputs["kottwitz_zero_shift"] = rat_map(kottwitz_invariants(t, {}));
        auto tp = newton_polygon_of_type(t);
        if (tp.polygon) {
            r.outputs["newton"] = polygon_json(*tp.polygon);
        } else {
            r.outputs["newton"] = nullptr;
            r.outputs["newton_reason"] = tp.reason;
        }
        r.text = "m = " + int_str(inv.m) + ", dim A = " + rat_str(inv.dim);
        for (auto& [k, v] : inv.inv) r.text += "\ninv_" + k + " = " + rat_str(v);
        if (tp.polygon) r.text += "\nnewton " + breakpoints_text(render_ascii(*tp.polygon));
        else r.text += "\nnewton: " + tp.reason;
        return r;
    });
}

// ---- forms ----

void add_forms(CLI::App& app, const Globals&, Dispatch& d)
{
    auto* fm = app.add_subcommand("forms", "hermitian forms over imaginary quadratic fields");
    fm->require_subcommand(1);

    struct L {
        long d = -1;
        int n = 1;
        std::string place = "inf";
        std::string entries;
    };
    auto l = std::make_shared<L>();
    auto* lo = fm->add_subcommand("local", "local class of a diagonal form");
    lo->add_option("-d", l->d, "field Q(sqrt d), d squarefree negative")->required();
    lo->add_option("-n", l->n, "rank")->required();
    lo->add_option("--place", l->place, "prime or inf")->required();
    lo->add_option("--entries", l->entries, "diagonal entries, comma separated rationals")->required();
    leaf(lo, d, "forms local", [l] {
        Result r;
        QuadImagField F(l->d);
        std::vector<Rat> e;
        json ej = json::array();
        for (auto& s : split(l->entries, ',')) {
            e.push_back(parse_rat(s));
            ej.push_back(rat_str(e.back()));
        }
        long v = parse_place(l->place);
        r.inputs = {{"d", l->d}, {"n", l->n}, {"place", place_str(v)}, {"entries", ej}};
        auto c = local_class_U(F, l->n, v, e);
        r.outputs = {{"class", to_string(c)}};
        switch (c.kind) {
        case LocalFormClass::Kind::Split: r.outputs["kind"] = "split"; break;
        case LocalFormClass::Kind::Nonsplit:
            r.outputs["kind"] = "nonsplit";
            r.outputs["xi"] = c.cls;
            break;
        case LocalFormClass::Kind::Signature:
            r.outputs["kind"] = "signature";
            r.outputs["signature"] = {c.pos, c.neg};
            break;
        }
        r.text = to_string(c);
        return r;
    });

    struct G {
        long d = -1;
        int n = 1;
        std::vector<std::string> local;
    };
    auto g = std::make_shared<G>();
    auto* gb = fm->add_subcommand("global", "global existence and classification");
    gb->add_option("-d", g->d, "field Q(sqrt d)")->required();
    gb->add_option("-n", g->n, "rank")->required();
    gb->add_option("--local", g->local, "place:xi, place:split or inf:pos,neg (repeatable)")->required();
    leaf(gb, d, "forms global", [g] {
        Result r;
        GlobalFormSpec s;
        s.F = QuadImagField(g->d);
        s.n = g->n;
        for (auto& x : g->local) s.local.push_back(parse_local(s.F, g->n, x));
        check_spec(s);
        json loc = json::array();
        for (auto& c : s.local) loc.push_back(to_string(c));
        r.inputs = {{"d", g->d}, {"n", g->n}, {"local", loc}};
        bool u = global_exists_U(s);
        auto gu = global_classify_GU(s);
        r.outputs = {{"exists_U", u},
                     {"exists_GU", gu.exists},
                     {"n_odd", gu.n_odd},
                     {"abs_signature", {gu.abs_signature.first, gu.abs_signature.second}},
                     {"xi_sum", gu.xi_sum},
                     {"flags", gu.flags}};
        r.text = std::string("U: ") + (u ? "exists" : "no global form") + "\nGU: " + (gu.exists ? "exists" : "no global form");
        for (auto& f : gu.flags) r.text += "\nflag: " + f;
        return r;
    });
}

// ---- building ----

struct BOpts {
    long l = 2;
    int n = 2;
    std::string ext = "none";
    long d = 0;
    std::string group = "sl";
    bool nomatch = false;
    int radius = 1;
    bool dot = false;
    int s = 0;
};

void add_building_opts(CLI::App* c, BOpts& o)
{
    c->add_option("-l", o.l, "residue prime")->required();
    c->add_option("-n", o.n, "rank")->required();
    c->add_option("--ext", o.ext, "none, inert or ramified")->default_val("none");
    c->add_option("--d", o.d, "K = Q_l(sqrt d)");
    c->add_flag("--nomatch", o.nomatch, "discriminant does not match the hyperbolic one");
}

HermitianSpace make_space(const BOpts& o)
{
    auto R = make_ring(o.l, parse_ext(o.ext), o.d);
    return hermitian_space(R, o.n, !o.nomatch);
}

json ring_inputs(const BOpts& o)
{
    return {{"l", o.l}, {"n", o.n}, {"ext", o.ext}, {"d", o.d}, {"match", !o.nomatch}};
}

void add_building(CLI::App& app, const Globals& gl, Dispatch& d)
{
    auto* b = app.add_subcommand("building", "Bruhat-Tits buildings of SL_n and U");
    b->require_subcommand(1);

    auto oc = std::make_shared<BOpts>();
    auto* ch = b->add_subcommand("chamber", "the standard chamber");
    add_building_opts(ch, *oc);
    ch->add_option("--group", oc->group, "sl or u")->default_val("sl");
    leaf(ch, d, "building chamber", [oc] {
        Result r;
        r.inputs = ring_inputs(*oc);
        r.inputs["group"] = oc->group;
        json lats = json::array(), types = json::array();
        LatticeChain C;
        if (oc->group == "sl") {
            auto R = make_ring(oc->l, parse_ext(oc->ext), oc->d);
            std::vector<KVec> basis;
            for (int i = 0; i < oc->n; ++i) {
                KVec v(oc->n);
                v[i] = {1, 0};
                basis.push_back(v);
            }
            C = chamber_from_basis_GL(R, basis);
        } else if (oc->group == "u") {
            auto H = make_space(*oc);
            C = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
            r.outputs["witt_index"] = H.r;
            for (auto& L : C.lattices) types.push_back(is_preferred(L, H).type);
            r.outputs["types"] = types;
        } else {
            throw precondition_error("group must be sl or u");
        }
        for (auto& L : C.lattices) lats.push_back(lattice_json(L));
        r.outputs["lattices"] = lats;
        r.outputs["periodic"] = C.periodic;
        r.text = std::to_string(C.lattices.size()) + " lattices";
        for (std::size_t i = 0; i < C.lattices.size(); ++i) {
            r.text += "\n  " + C.lattices[i].key();
            if (!types.empty()) r.text += "  type " + types[i].dump();
        }
        return r;
    });

    auto ob = std::make_shared<BOpts>();
    auto* ba = b->add_subcommand("ball", "ball around the standard vertex");
    add_building_opts(ba, *ob);
    ba->add_option("--group", ob->group, "sl or u")->default_val("sl");
    ba->add_option("--radius", ob->radius, "radius")->default_val(1);
    ba->add_flag("--dot", ob->dot, "print the ball as a DOT graph");
    leaf(ba, d, "building ball", [ob, &gl] {
        Result r;
        r.inputs = ring_inputs(*ob);
        r.inputs["group"] = ob->group;
        r.inputs["radius"] = ob->radius;
        Ball B;
        if (ob->group == "sl") {
            B = ball_SL(make_ring(ob->l, parse_ext(ob->ext), ob->d), ob->n, ob->radius, gl.budget);
        } else if (ob->group == "u") {
            B = ball_U(make_space(*ob), ob->radius, gl.budget);
        } else {
            throw precondition_error("group must be sl or u");
        }
        std::map<int, int> shells;
        for (int x : B.dist) shells[x] += 1;
        json sh = json::array();
        for (auto& [k, v] : shells) sh.push_back({k, v});
        r.outputs = {{"vertices", B.vertices.size()}, {"edges", B.edges.size()}, {"shells", sh}};
        if (ob->dot) r.outputs["dot"] = to_dot(B);
        r.text = std::to_string(B.vertices.size()) + " vertices, " + std::to_string(B.edges.size()) + " edges";
        if (ob->dot) {
            r.text = to_dot(B);
            r.text.pop_back();
        }
        return r;
    });

    auto os = std::make_shared<BOpts>();
    auto* sk = b->add_subcommand("skeleton", "faces of the base chamber of B(U) by dimension");
    add_building_opts(sk, *os);
    sk->add_option("-s", os->s, "simplex dimension")->default_val(0);
    leaf(sk, d, "building skeleton", [os] {
        Result r;
        r.inputs = ring_inputs(*os);
        r.inputs["s"] = os->s;
        auto H = make_space(*os);
        json orbs = json::array();
        r.text = "";
        for (auto& o : resolution_skeleton(H, os->s)) {
            json lats = json::array();
            for (auto& L : o.stabilized) lats.push_back(lattice_json(L));
            orbs.push_back({{"faces", o.faces}, {"types", o.types}, {"lattices", lats}, {"undecided", o.undecided}});
            if (!r.text.empty()) r.text += "\n";
            json f = o.faces, t = o.types;
            r.text += "faces " + f.dump() + " types " + t.dump() + (o.undecided ? " (undecided)" : "");
        }
        r.outputs = {{"witt_index", H.r}, {"orbits", orbs}};
        return r;
    });
}

// ---- level1 ----

void add_level1(CLI::App& app, const Globals& gl, Dispatch& d)
{
    auto* lv = app.add_subcommand("level1", "imaginary quadratic fields and the image of J");
    lv->require_subcommand(1);

    struct C {
        long d = 0, disc = 0;
    };
    auto c = std::make_shared<C>();
    auto* cg = lv->add_subcommand("classgroup", "class group by reduced forms");
    auto* od = cg->add_option("-d", c->d, "field Q(sqrt d)");
    auto* oD = cg->add_option("--disc", c->disc, "fundamental discriminant");
    od->excludes(oD);
    leaf(cg, d, "level1 classgroup", [c] {
        Result r;
        ClassGroup G;
        if (c->disc != 0) {
            G = class_group_of_disc(c->disc);
            r.inputs = {{"disc", c->disc}};
        } else if (c->d != 0) {
            G = class_group(QuadImagField(c->d));
            r.inputs = {{"d", c->d}};
        } else {
            throw precondition_error("give -d or --disc");
        }
        json forms = json::array();
        for (auto& f : G.forms) forms.push_back(to_string(f));
        json orders = json::array();
        for (int i = 0; i < G.h(); ++i) orders.push_back(G.order(i));
        r.outputs = {{"D", G.D}, {"h", G.h()}, {"forms", forms}, {"orders", orders}, {"table", G.mul}};
        r.text = "D = " + std::to_string(G.D) + ", h=" + std::to_string(G.h());
        for (auto& f : G.forms) r.text += "\n  " + to_string(f);
        return r;
    });

    struct P {
        long d = -1, p = 5, cap = 100000;
    };
    auto g = std::make_shared<P>();
    auto* gp = lv->add_subcommand("genprime", "least split prime l with t/t^c a topological generator");
    gp->add_option("-d", g->d, "field Q(sqrt d)")->required();
    gp->add_option("-p", g->p, "odd split prime")->required();
    gp->add_option("--cap", g->cap, "search bound for l")->default_val(100000);
    leaf(gp, d, "level1 genprime", [g] {
        Result r;
        QuadImagField F(g->d);
        r.inputs = {{"d", g->d}, {"p", g->p}, {"cap", g->cap}};
        auto x = find_generator_prime(F, g->p, g->cap);
        auto [a, b] = as_ab(F, x.t);
        r.outputs = {{"l", x.l},
                     {"t", to_string(F, x.t)},
                     {"t_ab", {rat_str(a), rat_str(b)}},
                     {"q_mod_p2", int_str(x.q_mod_p2)},
                     {"modulus", std::to_string(g->p * g->p)},
                     {"unit_power_test", x.unit_power_test}};
        r.text = "l = " + std::to_string(x.l) + ", t = " + to_string(F, x.t) + ", q = " + int_str(x.q_mod_p2) +
                 " mod " + std::to_string(g->p * g->p);
        return r;
    });

    struct J {
        long p = 5, k = 2, tmin = 2, tmax = 40;
        long witness_d = 0;
    };
    auto j = std::make_shared<J>();
    auto* jo = lv->add_subcommand("jorders", "orders p^nu_p(k^t - 1)");
    jo->add_option("-p", j->p, "odd prime")->required();
    auto* ok = jo->add_option("-k", j->k, "integer generator");
    auto* ow = jo->add_option("--witness-d", j->witness_d, "use q = t/t^c from the generator prime of Q(sqrt d)");
    ok->excludes(ow);
    jo->add_option("--tmin", j->tmin, "first t")->default_val(2);
    jo->add_option("--tmax", j->tmax, "last t")->default_val(40);
    leaf(jo, d, "level1 jorders", [j] {
        Result r;
        JOrderTable T;
        if (j->witness_d != 0) {
            QuadImagField F(j->witness_d);
            auto g = find_generator_prime(F, j->p);
            QuadInt t = g.t;
            long p = j->p;
            T = j_homotopy_orders(
                p, [F, t, p](int K) { return quotient_mod_pk(F, t, p, K); }, "t/t^c, t = " + to_string(F, t),
                j->tmin, j->tmax);
            r.inputs = {{"p", j->p}, {"witness_d", j->witness_d}, {"tmin", j->tmin}, {"tmax", j->tmax}};
        } else {
            T = j_homotopy_orders(j->p, j->k, j->tmin, j->tmax);
            r.inputs = {{"p", j->p}, {"k", j->k}, {"tmin", j->tmin}, {"tmax", j->tmax}};
        }
        json rows = json::array();
        r.text = "generator " + T.generator + "\n   t  nu  order";
        for (auto& row : T.rows) {
            json o = row.nu.infinite ? json("inf") : json(pow_str(T.p, row.nu.value));
            rows.push_back({{"t", row.t}, {"nu", val_json(row.nu)}, {"order", o}});
            std::ostringstream line;
            line << "\n" << std::string(row.t < 10 ? 3 : row.t < 100 ? 2 : row.t < 1000 ? 1 : 0, ' ') << row.t << "  "
                 << (row.nu.infinite ? std::string("inf") : std::to_string(row.nu.value)) << "  "
                 << o.get<std::string>();
            r.text += line.str();
        }
        r.outputs = {{"generator", T.generator}, {"rows", rows}};
        return r;
    });

    struct D {
        long d = -1, p = 5;
    };
    auto dc = std::make_shared<D>();
    auto* de = lv->add_subcommand("decomp", "decomposition group order of a split prime in the Hilbert class field");
    de->add_option("-d", dc->d, "field Q(sqrt d)")->required();
    de->add_option("-p", dc->p, "split prime")->required();
    leaf(de, d, "level1 decomp", [dc] {
        Result r;
        QuadImagField F(dc->d);
        r.inputs = {{"d", dc->d}, {"p", dc->p}};
        auto x = decomposition_count(F, dc->p);
        r.outputs = {{"u", to_string(x.u)}, {"f", x.f}, {"factors", x.factors}};
        r.text = "f = " + std::to_string(x.f) + ", " + std::to_string(x.factors) + " factor(s)";
        return r;
    });
    (void)gl;
}

}  // namespace

void register_commands(CLI::App& app, const Globals& g, Dispatch& d)
{
    add_greek(app, g, d);
    add_congruence(app, g, d);
    add_newton(app, g, d);
    add_hondatate(app, g, d);
    add_forms(app, g, d);
    add_building(app, g, d);
    add_level1(app, g, d);
}

}  // namespace chromo::cli
