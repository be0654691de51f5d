#include "specfid/loop/frozen.hpp"

#include "specfid/core/errors.hpp"
#include "specfid/core/io.hpp"
#include "specfid/core/json_io.hpp"
#include "specfid/core/sha256.hpp"
#include "specfid/core/text.hpp"

namespace specfid::loop {

namespace {

// The frozen artifact's byte representation. The hash covers exactly these
// bytes, so file-level and memory-level verification agree.
std::string canonical_probes(const std::vector<Probe>& probes) {
    return canonical_dump(probes_to_json(probes));
}

}  // namespace

FrozenTestSet freeze_test_set(std::vector<Probe> probes) {
    FrozenTestSet frozen;
    frozen.probes = std::move(probes);
    frozen.sha256 = sha256_hex(canonical_probes(frozen.probes));
    return frozen;
}

void verify_frozen(const FrozenTestSet& frozen) {
    if (sha256_hex(canonical_probes(frozen.probes)) != frozen.sha256)
        throw FrozenSetViolation("frozen-set violated: test probes changed in memory");
}

void save_frozen(const FrozenTestSet& frozen, const std::filesystem::path& dir) {
    io::ensure_dir(dir);
    io::write_file(dir / "frozen_test.json", canonical_probes(frozen.probes));
    io::write_file(dir / "frozen_test.json.sha256", frozen.sha256 + "\n");
}

FrozenTestSet load_frozen(const std::filesystem::path& dir) {
    const std::string raw = io::read_file(dir / "frozen_test.json");
    const std::string want = text::trim(io::read_file(dir / "frozen_test.json.sha256"));
    const std::string got = sha256_hex(raw);
    if (got != want)
        throw FrozenSetViolation("frozen-set violated: frozen_test.json does not match its sidecar hash");
    FrozenTestSet frozen;
    frozen.probes = probes_from_json(json::parse(raw));
    frozen.sha256 = got;
    verify_frozen(frozen);
    return frozen;
}

}  // namespace specfid::loop
