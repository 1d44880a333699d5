"""Deterministic labeled corpus of synthetic cluster-dump trees.

Each generated bundle mimics the directory layout of a dumped Kubernetes
cluster: per-service container logs and describe outputs under
``logs/pods/...`` (the subtrees selection keeps) plus decoy subtrees under
``logs/nodes/`` and ``logs/events/`` that selection must ignore.

Lines come in exactly two kinds. Noise lines carry the unique elements the
cleaner scrubs (ISO-8601 timestamps, IPv4 addresses, 12-hex-digit pod
suffixes) plus class-neutral words. Signature lines carry tokens from the
bundle's class vocabulary. The five class vocabularies below are fixed,
mutually disjoint, and survive cleaning untouched, so classifier tests can
dial corpus separability through ``signature_strength`` alone: at 0 the
corpus is pure noise, at s each file holds round(s * noise_lines) signature
lines.

Generation is a pure function of (spec, seed): bundle i uses an independent
generator seeded ``seed XOR i``, so re-running a spec reproduces every byte.
"""

import json
import random
from dataclasses import dataclass, asdict
from pathlib import Path

from .errors import ValidationError
from .labels import ALL_CLASSES, FailureClass

__all__ = [
    "CorpusSpec",
    "CorpusManifest",
    "SIGNATURE_TOKENS",
    "generate_corpus",
    "load_manifest",
    "MANIFEST_NAME",
]

MANIFEST_NAME = "manifest.jsonl"
SPEC_ECHO_NAME = "corpus_spec.json"

#: Per-class signature vocabularies: fixed, documented, mutually disjoint.
SIGNATURE_TOKENS: dict[FailureClass, tuple[str, ...]] = {
    FailureClass.CLUSTER: (
        "kubelet", "node-pressure", "evicted", "taint-manager",
        "unschedulable", "cordoned", "apiserver-timeout", "etcd-quorum",
    ),
    FailureClass.ARTIFACTORY: (
        "imagepullbackoff", "errimagepull", "registry-denied", "artifactory",
        "unauthorized-pull", "manifest-unknown", "blob-upload", "repo-quota",
    ),
    FailureClass.MICROSERVICE: (
        "oomkilled", "crashloopbackoff", "nullpointerexception", "segfault",
        "panic-goroutine", "exit-code-137", "stacktrace", "restart-loop",
    ),
    FailureClass.CICD_TEST: (
        "assertion-failed", "junit-report", "testcase-timeout", "expected-value",
        "pipeline-step", "flaky-retry", "harness-abort", "suite-teardown",
    ),
    FailureClass.ENVIRONMENT: (
        "dns-resolution", "mount-failed", "volume-attach", "persistentvolume",
        "storageclass", "network-unreachable", "dhcp-lease", "ntp-drift",
    ),
}

#: Class-neutral words used by noise lines and as signature-line filler.
_NOISE_WORDS: tuple[str, ...] = (
    "starting", "started", "listening", "reconcile", "sync", "status",
    "ready", "request", "response", "served", "handler", "metrics",
    "heartbeat", "probe", "liveness", "readiness", "scheduled", "created",
    "updated", "watch", "event", "queue", "worker", "thread", "pool",
    "connection", "session", "rotation", "checkpoint", "snapshot",
    "compaction", "leader", "election", "renewed", "observed", "progressing",
)

_SERVICE_NAMES = (
    "gateway", "auth", "billing", "search", "orders",
    "inventory", "payments", "catalog",
)

_HEX_DIGITS = "0123456789abcdef"


@dataclass(frozen=True)
class CorpusSpec:
    bundles_per_class: int = 10
    services: int = 3
    noise_lines: tuple[int, int] = (20, 40)
    signature_strength: float = 0.5
    seed: int = 0
    line_scale: int = 1  # jumbo runs multiply noise volume

    def validate(self) -> None:
        if self.bundles_per_class < 1:
            raise ValidationError("bundles_per_class must be >= 1")
        if self.services < 1:
            raise ValidationError("services must be >= 1")
        lo, hi = self.noise_lines
        if lo < 0 or hi < lo:
            raise ValidationError(f"noise_lines range invalid: {self.noise_lines}")
        if not 0.0 <= self.signature_strength <= 1.0:
            raise ValidationError("signature_strength must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.line_scale < 1:
            raise ValidationError("line_scale must be >= 1")


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[tuple[str, FailureClass], ...]
    seed: int
    spec: CorpusSpec


def _service_name(i: int) -> str:
    base = _SERVICE_NAMES[i % len(_SERVICE_NAMES)]
    return base if i < len(_SERVICE_NAMES) else f"{base}{i // len(_SERVICE_NAMES)}"


def _iso_timestamp(rng: random.Random) -> str:
    return "2023-%02d-%02dT%02d:%02d:%02d.%06dZ" % (
        rng.randint(1, 12), rng.randint(1, 28), rng.randint(0, 23),
        rng.randint(0, 59), rng.randint(0, 59), rng.randint(0, 999999),
    )


def _ipv4(rng: random.Random) -> str:
    return "%d.%d.%d.%d" % tuple(rng.randint(1, 254) for _ in range(4))


def _hex_id(rng: random.Random, length: int = 12) -> str:
    return "".join(rng.choice(_HEX_DIGITS) for _ in range(length))


def _noise_line(svc: str, rng: random.Random) -> str:
    level = rng.choice(("INFO", "INFO", "INFO", "WARN", "DEBUG"))
    words = " ".join(rng.sample(_NOISE_WORDS, 3))
    return (
        f"{_iso_timestamp(rng)} {level} {svc} {_ipv4(rng)} "
        f"pod/{svc}-{_hex_id(rng)} {words}"
    )


def _signature_line(svc: str, tokens: tuple[str, ...], rng: random.Random) -> str:
    chosen = rng.sample(tokens, rng.randint(2, 4))
    filler = rng.sample(_NOISE_WORDS, 2)
    return f"ERROR {svc} {filler[0]} " + " ".join(chosen) + f" {filler[1]}"


def signature_line_count(noise_count: int, strength: float) -> int:
    """Signature lines per file: round-half-up of strength * noise_count."""
    return int(strength * noise_count + 0.5)


def _file_lines(svc: str, label: FailureClass, spec: CorpusSpec, rng: random.Random) -> list[str]:
    lo, hi = spec.noise_lines
    noise_n = rng.randint(lo, hi) * spec.line_scale
    sig_n = signature_line_count(noise_n, spec.signature_strength)
    noise = [_noise_line(svc, rng) for _ in range(noise_n)]
    signal = [_signature_line(svc, SIGNATURE_TOKENS[label], rng) for _ in range(sig_n)]
    lines: list[str | None] = [None] * (noise_n + sig_n)
    for pos, line in zip(sorted(rng.sample(range(noise_n + sig_n), sig_n)), signal):
        lines[pos] = line
    it = iter(noise)
    return [line if line is not None else next(it) for line in lines]


def _decoy_lines(name: str, spec: CorpusSpec, rng: random.Random) -> list[str]:
    lo, hi = spec.noise_lines
    return [_noise_line(name, rng) for _ in range(rng.randint(lo, hi) * spec.line_scale)]


def _write(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _write_bundle(bundle_dir: Path, label: FailureClass, spec: CorpusSpec,
                  rng: random.Random) -> None:
    logs = bundle_dir / "logs"
    for i in range(spec.services):
        svc = _service_name(i)
        _write(logs / "pods" / svc / "containers" / f"{svc}.log",
               _file_lines(svc, label, spec, rng))
        _write(logs / "pods" / svc / "describe" / f"{svc}.txt",
               _file_lines(svc, label, spec, rng))
    for j in range(2):
        _write(logs / "nodes" / f"node-{j}.log", _decoy_lines(f"node-{j}", spec, rng))
    _write(logs / "events" / "events.log", _decoy_lines("events", spec, rng))


def selected_paths(spec: CorpusSpec, bundle_rel: str) -> list[str]:
    """Relative paths of the bundle files the selection rule should keep."""
    out = []
    for i in range(spec.services):
        svc = _service_name(i)
        out.append(f"logs/pods/{svc}/containers/{svc}.log")
        out.append(f"logs/pods/{svc}/describe/{svc}.txt")
    return sorted(out)


def generate_corpus(spec: CorpusSpec, out_dir: str | Path) -> CorpusManifest:
    """Write one labeled bundle tree per (class, index) plus a manifest.

    Refuses a non-empty output directory: corpora are immutable once
    generated, never silently overwritten.
    """
    spec.validate()
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise ValidationError(f"output directory {out} is not empty; refusing to overwrite")
    out.mkdir(parents=True, exist_ok=True)

    entries: list[tuple[str, FailureClass]] = []
    for ci, label in enumerate(ALL_CLASSES):
        for b in range(spec.bundles_per_class):
            bundle_index = ci * spec.bundles_per_class + b
            # sub-seed is seed XOR bundle index; seeding through bytes runs
            # it through SHA-512, since nearby integer seeds leave Mersenne
            # Twister streams correlated enough for a classifier to detect
            # the class-blocked index layout on otherwise pure noise
            sub_seed = spec.seed ^ bundle_index
            rng = random.Random(sub_seed.to_bytes(8, "big"))
            bundle_rel = f"{label.value}-{b:03d}"
            _write_bundle(out / bundle_rel, label, spec, rng)
            entries.append((bundle_rel, label))

    with open(out / MANIFEST_NAME, "w", encoding="utf-8", newline="\n") as fh:
        for path, label in entries:
            fh.write(json.dumps({"path": path, "label": label.value}, sort_keys=True) + "\n")
    echo = asdict(spec)
    echo["noise_lines"] = list(spec.noise_lines)
    with open(out / SPEC_ECHO_NAME, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(echo, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return CorpusManifest(entries=tuple(entries), seed=spec.seed, spec=spec)


def load_manifest(path: str | Path) -> list[tuple[str, FailureClass]]:
    """Read manifest records; returns (relative bundle path, label) pairs."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            entries.append((record["path"], FailureClass.from_name(record["label"])))
    return entries
