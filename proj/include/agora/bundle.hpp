#pragma once

#include <filesystem>

#include "agora/election_run.hpp"

namespace agora::bundle {

// Election bundle directory layout:
//   public.json          params + every public key
//   ballots.jsonl        one printed ballot per line
//   vc_init_<i>.json     per-VC init data + signing key
//   bb_init.json         shared BB init data + per-BB signing keys
//   trustee_init_<i>.json per-trustee init data + signing key
// Byte fields are hex; crypto structures use their canonical encoding.
void write_bundle(const std::filesystem::path& dir, const ea::SetupOutput& setup);
ea::SetupOutput read_bundle(const std::filesystem::path& dir);

// config file for `setup`: the ElectionParams fields
ea::ElectionParams read_params(const std::filesystem::path& file);
void write_params(const std::filesystem::path& file, const ea::ElectionParams& params);

run::Scenario read_scenario(const std::filesystem::path& file);
void write_scenario(const std::filesystem::path& file, const run::Scenario& scenario);

// run output directory: transcript.json, voters.json, delegated.json,
// vote_set_<i>.json, bb_transcript_<i>.json
void write_run(const std::filesystem::path& dir, const ea::SetupOutput& setup,
               const run::Scenario& scenario, const run::RunResult& result);

struct LoadedRun {
    std::vector<std::optional<proto::ElectionTranscript>> bb_transcripts;
    std::vector<nodes::VoterOutcome> voters;
    std::vector<audit::DelegatedAudit> delegated;
    std::uint32_t f_b = 0;

    std::optional<proto::ElectionTranscript> majority_transcript() const;
};

LoadedRun read_run(const std::filesystem::path& dir);

std::vector<audit::DelegatedAudit> read_delegated(const std::filesystem::path& file);

class BundleError : public std::runtime_error {
public:
    explicit BundleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace agora::bundle
