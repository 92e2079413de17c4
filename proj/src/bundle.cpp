#include "agora/bundle.hpp"

#include <fstream>

#include "json.hpp"

namespace agora::bundle {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex(std::span<const std::uint8_t> b) { return codec::to_hex(b); }

codec::Bytes unhex(const std::string& s) {
    auto b = codec::from_hex(s);
    if (!b) throw BundleError("bad hex field");
    return *b;
}

json to_json_scalar(const crypto::Scalar& s) { return hex(s.b); }

crypto::Scalar scalar_from(const json& j) {
    auto b = unhex(j.get<std::string>());
    if (b.size() != 32) throw BundleError("bad scalar length");
    crypto::Scalar s;
    std::copy(b.begin(), b.end(), s.b.begin());
    return s;
}

json to_json_elem(const crypto::Element& e) { return hex(e.b); }
crypto::Element elem_from(const json& j) { return crypto::Element{unhex(j.get<std::string>())}; }

json to_json_key(const crypto::SigningKey& k) {
    return json{{"secret", to_json_scalar(k.secret)}, {"pub", to_json_elem(k.pub)}};
}

crypto::SigningKey key_from(const json& j) {
    return crypto::SigningKey{scalar_from(j.at("secret")), elem_from(j.at("pub"))};
}

json to_json_share(const crypto::Share& s) {
    codec::Writer w;
    crypto::encode(w, s);
    return hex(w.data());
}

crypto::Share share_from(const json& j) {
    auto b = unhex(j.get<std::string>());
    codec::Reader r(b);
    auto s = crypto::decode_share(r);
    r.expect_done();
    return s;
}

json to_json_hash_commitment(const crypto::HashCommitment& h) {
    return json{{"digest", hex(h.digest)}, {"salt", h.salt}};
}

crypto::HashCommitment hash_commitment_from(const json& j) {
    crypto::HashCommitment h;
    auto d = unhex(j.at("digest").get<std::string>());
    if (d.size() != 32) throw BundleError("bad digest length");
    std::copy(d.begin(), d.end(), h.digest.begin());
    h.salt = j.at("salt").get<std::uint64_t>();
    return h;
}

json params_to_json(const ea::ElectionParams& p) {
    return json{{"n", p.n},
                {"m", p.m},
                {"option_labels", p.option_labels},
                {"n_v", p.n_v},
                {"f_v", p.f_v},
                {"n_b", p.n_b},
                {"f_b", p.f_b},
                {"n_t", p.n_t},
                {"h_t", p.h_t},
                {"t_end", p.t_end},
                {"rng_seed", p.rng_seed},
                {"group", p.group_name}};
}

ea::ElectionParams params_from_json(const json& j) {
    ea::ElectionParams p;
    p.n = j.at("n").get<std::uint64_t>();
    p.m = j.at("m").get<std::uint64_t>();
    if (j.contains("option_labels"))
        p.option_labels = j.at("option_labels").get<std::vector<std::string>>();
    p.n_v = j.at("n_v").get<std::uint32_t>();
    p.f_v = j.at("f_v").get<std::uint32_t>();
    p.n_b = j.at("n_b").get<std::uint32_t>();
    p.f_b = j.at("f_b").get<std::uint32_t>();
    p.n_t = j.at("n_t").get<std::uint32_t>();
    p.h_t = j.at("h_t").get<std::uint32_t>();
    p.t_end = j.at("t_end").get<std::uint64_t>();
    p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    p.group_name = j.value("group", "p256");
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw BundleError("cannot write " + path.string());
    out << content;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw BundleError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw BundleError(path.string() + ": " + e.what());
    }
}

}  // namespace

void write_params(const fs::path& file, const ea::ElectionParams& params) {
    write_file(file, params_to_json(params).dump(2) + "\n");
}

ea::ElectionParams read_params(const fs::path& file) { return params_from_json(read_json(file)); }

void write_bundle(const fs::path& dir, const ea::SetupOutput& setup) {
    fs::create_directories(dir);
    const auto& pub = setup.public_info;

    json pj;
    pj["params"] = params_to_json(pub.params);
    pj["ea_pub"] = to_json_elem(pub.ea_pub);
    pj["vc_pubs"] = json::array();
    for (const auto& e : pub.vc_pubs) pj["vc_pubs"].push_back(to_json_elem(e));
    pj["bb_pubs"] = json::array();
    for (const auto& e : pub.bb_pubs) pj["bb_pubs"].push_back(to_json_elem(e));
    pj["trustee_pubs"] = json::array();
    for (const auto& e : pub.trustee_pubs) pj["trustee_pubs"].push_back(to_json_elem(e));
    write_file(dir / "public.json", pj.dump(2) + "\n");

    std::string ballots;
    for (const auto& b : setup.ballots) {
        json bj;
        bj["serial"] = b.serial_no;
        for (int p = 0; p < 2; p++) {
            json lines = json::array();
            for (const auto& line : b.parts[p]) {
                lines.push_back(json{{"vote_code", hex(line.vote_code)},
                                     {"option", line.option_label},
                                     {"receipt", line.receipt}});
            }
            bj[p == 0 ? "part_a" : "part_b"] = std::move(lines);
        }
        ballots += bj.dump() + "\n";
    }
    write_file(dir / "ballots.jsonl", ballots);

    for (std::size_t i = 0; i < setup.vc_inits.size(); i++) {
        const auto& vi = setup.vc_inits[i];
        json vj;
        vj["vc_index"] = vi.vc_index;
        vj["key"] = to_json_key(setup.vc_keys[i]);
        vj["msk_share"] = to_json_share(vi.msk_share);
        json ballots_j = json::array();
        for (const auto& entry : vi.ballots) {
            json ej;
            ej["serial"] = entry.serial_no;
            for (int p = 0; p < 2; p++) {
                json lines = json::array();
                for (const auto& line : entry.parts[p]) {
                    lines.push_back(json{{"code_commitment",
                                          to_json_hash_commitment(line.code_commitment)},
                                         {"receipt_share", to_json_share(line.receipt_share)}});
                }
                ej[p == 0 ? "part_a" : "part_b"] = std::move(lines);
            }
            ballots_j.push_back(std::move(ej));
        }
        vj["ballots"] = std::move(ballots_j);
        write_file(dir / ("vc_init_" + std::to_string(i) + ".json"), vj.dump() + "\n");
    }

    json bb;
    {
        codec::Writer w;
        proto::encode(w, setup.bb_init);
        bb["init"] = hex(w.data());
    }
    bb["keys"] = json::array();
    for (const auto& k : setup.bb_keys) bb["keys"].push_back(to_json_key(k));
    write_file(dir / "bb_init.json", bb.dump() + "\n");

    for (std::size_t i = 0; i < setup.trustee_inits.size(); i++) {
        const auto& ti = setup.trustee_inits[i];
        json tj;
        tj["trustee_index"] = ti.trustee_index;
        tj["key"] = to_json_key(setup.trustee_keys[i]);
        json ballots_j = json::array();
        for (const auto& entry : ti.ballots) {
            json ej;
            ej["serial"] = entry.serial_no;
            for (int p = 0; p < 2; p++) {
                json lines = json::array();
                for (const auto& line : entry.parts[p]) {
                    codec::Writer w;
                    crypto::encode(w, line.commitment);
                    lines.push_back(json{{"commitment", hex(w.data())},
                                         {"opening_share", to_json_share(line.opening_share)},
                                         {"zk_share", to_json_share(line.zk_share)}});
                }
                ej[p == 0 ? "part_a" : "part_b"] = std::move(lines);
            }
            ballots_j.push_back(std::move(ej));
        }
        tj["ballots"] = std::move(ballots_j);
        write_file(dir / ("trustee_init_" + std::to_string(i) + ".json"), tj.dump() + "\n");
    }
}

ea::SetupOutput read_bundle(const fs::path& dir) {
    ea::SetupOutput out;
    json pj = read_json(dir / "public.json");
    out.public_info.params = params_from_json(pj.at("params"));
    out.public_info.ea_pub = elem_from(pj.at("ea_pub"));
    for (const auto& e : pj.at("vc_pubs")) out.public_info.vc_pubs.push_back(elem_from(e));
    for (const auto& e : pj.at("bb_pubs")) out.public_info.bb_pubs.push_back(elem_from(e));
    for (const auto& e : pj.at("trustee_pubs"))
        out.public_info.trustee_pubs.push_back(elem_from(e));
    const auto& params = out.public_info.params;

    std::ifstream ballots(dir / "ballots.jsonl");
    if (!ballots) throw BundleError("cannot read ballots.jsonl");
    std::string line;
    while (std::getline(ballots, line)) {
        if (line.empty()) continue;
        json bj = json::parse(line);
        ea::Ballot b;
        b.serial_no = bj.at("serial").get<std::uint64_t>();
        for (int p = 0; p < 2; p++) {
            for (const auto& lj : bj.at(p == 0 ? "part_a" : "part_b")) {
                ea::BallotLine bl;
                bl.vote_code = unhex(lj.at("vote_code").get<std::string>());
                bl.option_label = lj.at("option").get<std::string>();
                bl.receipt = lj.at("receipt").get<std::uint64_t>();
                b.parts[p].push_back(std::move(bl));
            }
        }
        out.ballots.push_back(std::move(b));
    }

    for (std::uint32_t i = 0; i < params.n_v; i++) {
        json vj = read_json(dir / ("vc_init_" + std::to_string(i) + ".json"));
        ea::VcInit vi;
        vi.vc_index = vj.at("vc_index").get<std::uint32_t>();
        vi.msk_share = share_from(vj.at("msk_share"));
        out.vc_keys.push_back(key_from(vj.at("key")));
        for (const auto& ej : vj.at("ballots")) {
            ea::VcBallotEntry entry;
            entry.serial_no = ej.at("serial").get<std::uint64_t>();
            for (int p = 0; p < 2; p++) {
                for (const auto& lj : ej.at(p == 0 ? "part_a" : "part_b")) {
                    ea::VcLine vl;
                    vl.code_commitment = hash_commitment_from(lj.at("code_commitment"));
                    vl.receipt_share = share_from(lj.at("receipt_share"));
                    entry.parts[p].push_back(std::move(vl));
                }
            }
            vi.ballots.push_back(std::move(entry));
        }
        out.vc_inits.push_back(std::move(vi));
    }

    json bb = read_json(dir / "bb_init.json");
    {
        auto raw = unhex(bb.at("init").get<std::string>());
        codec::Reader r(raw);
        out.bb_init = proto::decode_bb_init(r);
        r.expect_done();
    }
    for (const auto& kj : bb.at("keys")) out.bb_keys.push_back(key_from(kj));

    for (std::uint32_t i = 0; i < params.n_t; i++) {
        json tj = read_json(dir / ("trustee_init_" + std::to_string(i) + ".json"));
        ea::TrusteeInit ti;
        ti.trustee_index = tj.at("trustee_index").get<std::uint32_t>();
        out.trustee_keys.push_back(key_from(tj.at("key")));
        for (const auto& ej : tj.at("ballots")) {
            ea::TrusteeBallotEntry entry;
            entry.serial_no = ej.at("serial").get<std::uint64_t>();
            for (int p = 0; p < 2; p++) {
                for (const auto& lj : ej.at(p == 0 ? "part_a" : "part_b")) {
                    ea::TrusteeLine tl;
                    auto raw = unhex(lj.at("commitment").get<std::string>());
                    codec::Reader r(raw);
                    tl.commitment = crypto::decode_commitment(r);
                    tl.opening_share = share_from(lj.at("opening_share"));
                    tl.zk_share = share_from(lj.at("zk_share"));
                    entry.parts[p].push_back(std::move(tl));
                }
            }
            ti.ballots.push_back(std::move(entry));
        }
        out.trustee_inits.push_back(std::move(ti));
    }

    // structural sanity: counts must match the declared parameters
    if (out.ballots.size() != params.n || out.vc_inits.size() != params.n_v ||
        out.trustee_inits.size() != params.n_t || out.public_info.vc_pubs.size() != params.n_v)
        throw BundleError("bundle inconsistent with its declared parameters");
    return out;
}

run::Scenario read_scenario(const fs::path& file) {
    json j = read_json(file);
    run::Scenario sc;
    sc.sim.seed = j.value("seed", 0ULL);
    sc.sim.delta = j.value("delta", 5u);
    sc.sim.drift = j.value("drift", 0u);
    sc.sim.t_comp = j.value("t_comp", 1u);
    sc.sim.t_end = j.value("t_end", 0LL);
    sc.sim.barrier_d = j.value("barrier_d", -1LL);
    sc.sim.mode = j.value("mode", std::string("liveness")) == "safety" ? sim::Mode::kSafety
                                                                       : sim::Mode::kLiveness;
    sc.sim.delay_policy = j.value("delay_policy", std::string("random"));
    sc.sim.adversary = j.value("adversary", std::string("none"));
    if (!adversary::known_policy(sc.sim.adversary))
        throw BundleError("unknown adversary policy: " + sc.sim.adversary);
    if (j.contains("corrupted")) {
        const auto& c = j.at("corrupted");
        auto fill = [&](const char* key, std::set<std::uint32_t>& out_set) {
            if (c.contains(key))
                for (const auto& v : c.at(key)) out_set.insert(v.get<std::uint32_t>());
        };
        fill("vc", sc.sim.corrupted_vcs);
        fill("bb", sc.sim.corrupted_bbs);
        fill("trustee", sc.sim.corrupted_trustees);
        fill("voter", sc.sim.corrupted_voters);
    }
    sc.sim.unsound_override = j.value("unsound", false);
    sc.sim.max_ticks = j.value("max_ticks", 2'000'000LL);
    sc.sim.log_events = j.value("log_events", false);
    sc.patience = j.value("patience", -1LL);
    if (j.contains("intents")) {
        for (const auto& ij : j.at("intents")) {
            run::VoterIntent intent;
            intent.serial = ij.at("serial").get<std::uint64_t>();
            std::string part = ij.value("part", "A");
            if (part != "A" && part != "B") throw BundleError("intent part must be A or B");
            intent.part = part == "A" ? ea::Part::A : ea::Part::B;
            intent.option = ij.at("option").get<std::uint32_t>();
            intent.start_tick = ij.value("start_tick", 0LL);
            sc.intents.push_back(intent);
        }
    }
    return sc;
}

void write_scenario(const fs::path& file, const run::Scenario& sc) {
    json j;
    j["seed"] = sc.sim.seed;
    j["delta"] = sc.sim.delta;
    j["drift"] = sc.sim.drift;
    j["t_comp"] = sc.sim.t_comp;
    j["t_end"] = sc.sim.t_end;
    j["barrier_d"] = sc.sim.barrier_d;
    j["mode"] = sc.sim.mode == sim::Mode::kSafety ? "safety" : "liveness";
    j["delay_policy"] = sc.sim.delay_policy;
    j["adversary"] = sc.sim.adversary;
    json c;
    c["vc"] = sc.sim.corrupted_vcs;
    c["bb"] = sc.sim.corrupted_bbs;
    c["trustee"] = sc.sim.corrupted_trustees;
    c["voter"] = sc.sim.corrupted_voters;
    j["corrupted"] = std::move(c);
    j["unsound"] = sc.sim.unsound_override;
    j["max_ticks"] = sc.sim.max_ticks;
    j["log_events"] = sc.sim.log_events;
    j["patience"] = sc.patience;
    json intents = json::array();
    for (const auto& i : sc.intents) {
        intents.push_back(json{{"serial", i.serial},
                               {"part", i.part == ea::Part::A ? "A" : "B"},
                               {"option", i.option},
                               {"start_tick", i.start_tick}});
    }
    j["intents"] = std::move(intents);
    write_file(file, j.dump(2) + "\n");
}

void write_run(const fs::path& dir, const ea::SetupOutput& setup, const run::Scenario& scenario,
               const run::RunResult& result) {
    fs::create_directories(dir);
    const auto& params = setup.public_info.params;

    json tj;
    tj["digest"] = hex(result.transcript.digest);
    tj["final_tick"] = result.transcript.final_tick;
    tj["f_b"] = params.f_b;
    json metrics;
    metrics["messages_total"] = result.transcript.metrics.messages_total;
    metrics["retransmissions"] = result.transcript.metrics.retransmissions;
    metrics["max_honest_delay"] = result.transcript.metrics.max_honest_delay;
    metrics["max_drift_seen"] = result.transcript.metrics.max_drift_seen;
    json by_kind;
    for (const auto& [kind, count] : result.transcript.metrics.messages_by_kind)
        by_kind[std::to_string(kind)] = count;
    metrics["messages_by_kind"] = std::move(by_kind);
    json latencies = json::array();
    for (const auto& v : result.voters)
        if (v.got_receipt) latencies.push_back(v.latency);
    metrics["receipt_latencies"] = std::move(latencies);
    tj["metrics"] = std::move(metrics);
    tj["node_digests"] = result.transcript.node_digests_hex;
    if (!result.transcript.event_log.empty()) tj["events"] = result.transcript.event_log;
    write_file(dir / "transcript.json", tj.dump(2) + "\n");

    json voters = json::array();
    for (const auto& v : result.voters) {
        voters.push_back(json{{"serial", v.serial},
                              {"got_receipt", v.got_receipt},
                              {"exhausted", v.exhausted},
                              {"receipt", v.receipt},
                              {"attempts", v.attempts},
                              {"latency", v.latency},
                              {"part", v.part == ea::Part::A ? "A" : "B"},
                              {"option", v.option},
                              {"cast_code", hex(v.cast_code)}});
    }
    write_file(dir / "voters.json", voters.dump(2) + "\n");

    json delegated = json::array();
    for (const auto& d : run::delegated_audits(setup, result.voters)) {
        json lines = json::array();
        for (const auto& l : d.unused_lines)
            lines.push_back(json{{"vote_code", hex(l.vote_code)},
                                 {"option", l.option_label},
                                 {"receipt", l.receipt}});
        delegated.push_back(json{{"serial", d.serial},
                                 {"unused_part", d.unused_part == ea::Part::A ? "A" : "B"},
                                 {"unused_lines", std::move(lines)},
                                 {"cast_code", hex(d.cast_code)}});
    }
    write_file(dir / "delegated.json", delegated.dump(2) + "\n");

    for (std::size_t i = 0; i < result.vc_sets.size(); i++) {
        json vs;
        vs["available"] = result.vc_sets[i].has_value();
        if (result.vc_sets[i]) vs["canonical"] = hex(result.vc_sets[i]->canonical());
        write_file(dir / ("vote_set_" + std::to_string(i) + ".json"), vs.dump() + "\n");
    }
    for (std::size_t i = 0; i < result.bb_transcripts.size(); i++) {
        json bt;
        bt["available"] = result.bb_transcripts[i].has_value();
        if (result.bb_transcripts[i]) {
            codec::Writer w;
            proto::encode(w, *result.bb_transcripts[i]);
            bt["canonical"] = hex(w.data());
        }
        write_file(dir / ("bb_transcript_" + std::to_string(i) + ".json"), bt.dump() + "\n");
    }
    write_file(dir / "scenario_used.json", "");
    write_scenario(dir / "scenario_used.json", scenario);
}

std::optional<proto::ElectionTranscript> LoadedRun::majority_transcript() const {
    std::vector<std::optional<codec::Bytes>> bodies;
    for (const auto& t : bb_transcripts) {
        if (!t) {
            bodies.push_back(std::nullopt);
            continue;
        }
        codec::Writer w;
        proto::encode(w, *t);
        bodies.push_back(w.take());
    }
    auto v = sim::majority_value(bodies, f_b + 1);
    if (!v) return std::nullopt;
    codec::Reader r(*v);
    return proto::decode_transcript(r);
}

std::vector<audit::DelegatedAudit> read_delegated(const fs::path& file) {
    std::vector<audit::DelegatedAudit> out;
    json j = read_json(file);
    for (const auto& dj : j) {
        audit::DelegatedAudit d;
        d.serial = dj.at("serial").get<std::uint64_t>();
        d.unused_part = dj.at("unused_part").get<std::string>() == "A" ? ea::Part::A : ea::Part::B;
        for (const auto& lj : dj.at("unused_lines")) {
            ea::BallotLine l;
            l.vote_code = unhex(lj.at("vote_code").get<std::string>());
            l.option_label = lj.at("option").get<std::string>();
            l.receipt = lj.at("receipt").get<std::uint64_t>();
            d.unused_lines.push_back(std::move(l));
        }
        d.cast_code = unhex(dj.at("cast_code").get<std::string>());
        out.push_back(std::move(d));
    }
    return out;
}

LoadedRun read_run(const fs::path& dir) {
    LoadedRun out;
    json tj = read_json(dir / "transcript.json");
    out.f_b = tj.value("f_b", 0u);
    for (std::uint32_t i = 0;; i++) {
        fs::path p = dir / ("bb_transcript_" + std::to_string(i) + ".json");
        if (!fs::exists(p)) break;
        json bt = read_json(p);
        if (bt.value("available", false)) {
            auto raw = unhex(bt.at("canonical").get<std::string>());
            codec::Reader r(raw);
            out.bb_transcripts.push_back(proto::decode_transcript(r));
        } else {
            out.bb_transcripts.push_back(std::nullopt);
        }
    }
    if (fs::exists(dir / "voters.json")) {
        json vj = read_json(dir / "voters.json");
        for (const auto& v : vj) {
            nodes::VoterOutcome o;
            o.serial = v.at("serial").get<std::uint64_t>();
            o.got_receipt = v.at("got_receipt").get<bool>();
            o.exhausted = v.at("exhausted").get<bool>();
            o.receipt = v.at("receipt").get<std::uint64_t>();
            o.attempts = v.at("attempts").get<std::uint32_t>();
            o.latency = v.at("latency").get<sim::Tick>();
            o.part = v.at("part").get<std::string>() == "A" ? ea::Part::A : ea::Part::B;
            o.option = v.at("option").get<std::uint32_t>();
            o.cast_code = unhex(v.at("cast_code").get<std::string>());
            out.voters.push_back(std::move(o));
        }
    }
    if (fs::exists(dir / "delegated.json")) out.delegated = read_delegated(dir / "delegated.json");
    return out;
}

}  // namespace agora::bundle
