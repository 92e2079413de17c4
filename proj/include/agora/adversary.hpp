#pragma once

#include "agora/vc_node.hpp"

namespace agora::adversary {

// Built-in policies and the property each stresses:
//   silent-vc        liveness: voters must route around dead collectors
//   equivocating-vc  UCERT exclusivity and BB vote-set agreement
//   share-withholder receipt threshold: no quorum, no receipt
//   recover-liar     recovery only accepts certificate-backed responses
//   garbage-bb       majority reads filter arbitrary read replies
//   delay-maximizer  scheduling: run with delay_policy all-min / all-max /
//                    alternating plus seeded random (transport level)
inline const char* kPolicyNames[] = {"none",          "silent-vc",   "equivocating-vc",
                                     "share-withholder", "recover-liar", "garbage-bb",
                                     "delay-maximizer"};

bool known_policy(const std::string& name);

// drops every input; stands in for any crashed or mute corrupted node
class SilentNode : public sim::Node {
public:
    void on_message(sim::NodeCtx&, proto::NodeAddr, bool, const proto::WireMessage&) override {}
    codec::Bytes state_digest() const override;
};

// corrupted BB node: answers every read with random garbage and ignores
// all writes
class GarbageBbNode : public sim::Node {
public:
    void on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                    const proto::WireMessage& m) override;
    codec::Bytes state_digest() const override;
};

// fault flags a corrupted VC node should run with under the given policy;
// nullopt means the corrupted VC is silent instead
std::optional<nodes::VcFaults> vc_faults_for(const std::string& policy);

}  // namespace agora::adversary
