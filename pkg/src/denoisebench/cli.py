"""Command-line driver: mix, denoise, eval, report, mos-serve.

A JSON config file captures one reproducible run; every value can be
overridden by flags. Exit codes: 0 success, 1 partial per-file failures,
2 configuration or fatal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adaptive import ALGORITHMS, OptimizerParams, denoise_adaptive
from .audio import AudioBuffer, mix_at_snr, read_wav, resample_to_8k, write_wav
from .metrics import snr_improvement
from .vad import VadParams, detect
from .wavelets import FAMILIES, WaveletConfig, denoise_wavelet

CSV_HEADER = ["file", "algorithm", "variant", "input_snr_db", "output_snr_db",
              "improvement_db", "segsnr_db", "lag"]

_SNR_RE = re.compile(r"_snr(-?\d+(?:\.\d+)?)(?:__|$)")


@dataclass
class ExperimentConfig:
    clean_dir: str = "clean"
    noise_file: str = "noise.wav"
    output_dir: str = "out"
    snr_targets: list = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0])
    families: list = field(default_factory=lambda: list(FAMILIES))
    kinds: list = field(default_factory=lambda: ["dwt", "wpt"])
    methods: list = field(default_factory=lambda: ["universal", "balance_sparsity"])
    modes: list = field(default_factory=lambda: ["soft", "hard"])
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    vad_features: list = field(default_factory=lambda: ["energy", "cepstral"])
    seed: int = 0
    jobs: int = 1

    @classmethod
    def load(cls, path: str | None, overrides: dict) -> "ExperimentConfig":
        cfg = cls()
        if path:
            data = json.loads(Path(path).read_text())
            for k, v in data.items():
                if not hasattr(cfg, k):
                    raise ValueError(f"unknown config key {k!r}")
                setattr(cfg, k, v)
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        env_seed = os.environ.get("DENOISE_BENCH_SEED")
        if env_seed is not None:
            cfg.seed = int(env_seed)
        return cfg


def _load_8k(path) -> AudioBuffer:
    return resample_to_8k(read_wav(path))


def _snr_target_of(name: str) -> float | None:
    m = _SNR_RE.search(name)
    return float(m.group(1)) if m else None


def _fmt_snr(value: float) -> str:
    return f"{value:g}"


def cmd_mix(cfg: ExperimentConfig) -> int:
    """Noise-mix every clean file at every SNR target; write a manifest."""
    out = Path(cfg.output_dir)
    noise_path = Path(cfg.noise_file)
    clean_paths = sorted(Path(cfg.clean_dir).glob("*.wav"))
    if not noise_path.exists():
        print(f"error: noise file {noise_path} not found", file=sys.stderr)
        return 2
    if not clean_paths:
        print(f"error: no WAV files in {cfg.clean_dir}", file=sys.stderr)
        return 2
    noise = _load_8k(noise_path)
    (out / "clean").mkdir(parents=True, exist_ok=True)
    (out / "noisy").mkdir(parents=True, exist_ok=True)
    rows, failures = [], []
    for path in clean_paths:
        try:
            clean = _load_8k(path)
            write_wav(clean, out / "clean" / f"{path.stem}.wav")
            for target in cfg.snr_targets:
                noisy, spec = mix_at_snr(clean, noise, float(target))
                # measured over the same active region the mixer used
                scaled = noisy.samples - clean.samples
                from .audio import _active_mask
                mask = _active_mask(clean)
                measured = 10.0 * np.log10(np.mean(clean.samples[mask] ** 2)
                                           / np.mean(scaled[mask] ** 2))
                name = f"{path.stem}_snr{_fmt_snr(float(target))}.wav"
                write_wav(noisy, out / "noisy" / name)
                rows.append([name, path.stem, _fmt_snr(float(target)),
                             f"{measured:.6f}", f"{spec.noise_gain:.10g}"])
        except Exception as exc:
            failures.append((path.name, str(exc)))
    with open(out / "mix_manifest.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["file", "stem", "target_snr_db", "measured_snr_db", "noise_gain"])
        w.writerows(rows)
    meta = {"snr_measurement_region": "vad_active", "seed": cfg.seed,
            "noise_file": str(noise_path), "looped_noise": True}
    (out / "mix_metadata.json").write_text(json.dumps(meta, indent=2) + "\n")
    return _finish("mix", len(rows), failures)


def _wavelet_grid(cfg: ExperimentConfig):
    for family in cfg.families:
        for kind in cfg.kinds:
            for method in cfg.methods:
                for mode in cfg.modes:
                    yield WaveletConfig(family=family, kind=kind,
                                        method=method, mode=mode)


def _denoise_one(task) -> tuple[str, dict] | Exception:
    noisy_path, out_path, method, payload = task
    try:
        noisy = read_wav(noisy_path)
        if method == "wavelet":
            wcfg: WaveletConfig = payload
            denoised = denoise_wavelet(noisy, wcfg)
            meta = {"method": "wavelet", "family": wcfg.family, "kind": wcfg.kind,
                    "levels": wcfg.levels, "threshold": wcfg.method,
                    "mode": wcfg.mode}
        else:
            algo, feature = payload
            params = OptimizerParams.defaults(algo)
            vad = detect(noisy, VadParams(feature=feature))
            denoised = denoise_adaptive(noisy, params, vad, mode="vad_reference")
            meta = {"method": "adaptive", "algorithm": algo, "vad_feature": feature,
                    "order": params.order, "mu": params.mu, "alpha": params.alpha,
                    "c": params.c, "gamma": params.gamma}
        write_wav(denoised, out_path)
        return (str(out_path), meta)
    except Exception as exc:
        return exc


def cmd_denoise(cfg: ExperimentConfig, method: str) -> int:
    """Run the wavelet or adaptive grid over the noisy corpus."""
    out = Path(cfg.output_dir)
    noisy_dir = out / "noisy"
    manifest = out / "mix_manifest.csv"
    if not manifest.exists() or not noisy_dir.is_dir():
        print("error: run `mix` first (missing noisy corpus or manifest)",
              file=sys.stderr)
        return 2
    with open(manifest) as fh:
        noisy_files = [row["file"] for row in csv.DictReader(fh)]
    dest = out / "denoised"
    dest.mkdir(parents=True, exist_ok=True)
    tasks = []
    for name in sorted(noisy_files):
        stem = Path(name).stem
        if method == "wavelet":
            for wcfg in _wavelet_grid(cfg):
                out_name = f"{stem}__wavelet__{wcfg.variant}.wav"
                tasks.append((noisy_dir / name, dest / out_name, "wavelet", wcfg))
        else:
            for algo in cfg.algorithms:
                for feature in cfg.vad_features:
                    out_name = f"{stem}__{algo}__vad-{feature}.wav"
                    tasks.append((noisy_dir / name, dest / out_name,
                                  "adaptive", (algo, feature)))
    failures = []
    metadata = {}
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_denoise_one, tasks))
    else:
        results = [_denoise_one(t) for t in tasks]
    for task, result in zip(tasks, results):
        if isinstance(result, Exception):
            failures.append((task[1].name, str(result)))
        else:
            path, meta = result
            metadata[Path(path).name] = meta
    meta_path = dest / f"denoise_metadata_{method}.json"
    existing = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    existing.update(metadata)
    meta_path.write_text(json.dumps(existing, indent=2, sort_keys=True) + "\n")
    return _finish(f"denoise/{method}", len(metadata), failures)


def cmd_eval(cfg: ExperimentConfig) -> int:
    """Score every denoised file against its clean/noisy counterparts."""
    out = Path(cfg.output_dir)
    denoised_dir = out / "denoised"
    if not denoised_dir.is_dir():
        print("error: no denoised corpus; run `denoise` first", file=sys.stderr)
        return 2
    rows, failures = [], []
    for path in sorted(denoised_dir.glob("*.wav")):
        parts = path.stem.split("__")
        if len(parts) != 3:
            failures.append((path.name, "unrecognized name"))
            continue
        noisy_stem, algorithm, variant = parts
        clean_stem = _SNR_RE.sub("", noisy_stem)
        clean_path = out / "clean" / f"{clean_stem}.wav"
        noisy_path = out / "noisy" / f"{noisy_stem}.wav"
        if not clean_path.exists() or not noisy_path.exists():
            failures.append((path.name, "missing clean or noisy counterpart"))
            continue
        try:
            report = snr_improvement(read_wav(clean_path), read_wav(noisy_path),
                                     read_wav(path), algorithm=algorithm,
                                     variant=variant, file=path.name)
        except Exception as exc:
            failures.append((path.name, str(exc)))
            continue
        rows.append([path.name, algorithm, variant,
                     f"{report.input_snr_db:.6f}", f"{report.output_snr_db:.6f}",
                     f"{report.improvement_db:.6f}", f"{report.segsnr_db:.6f}",
                     report.lag])
    with open(out / "results.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        w.writerows(rows)
    return _finish("eval", len(rows), failures)


def cmd_report(cfg: ExperimentConfig, results_csv: str | None,
               pesq_csv: str | None) -> int:
    """Group mean improvement per (algorithm, variant, input SNR target)."""
    path = Path(results_csv) if results_csv else Path(cfg.output_dir) / "results.csv"
    if not path.exists():
        print(f"error: results CSV {path} not found", file=sys.stderr)
        return 2
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        print("error: results CSV is empty", file=sys.stderr)
        return 2
    pesq = {}
    if pesq_csv:
        with open(pesq_csv) as fh:
            for r in csv.DictReader(fh):
                key = (r["file"], r["algorithm"], r["variant"])
                pesq[key] = float(r["pesq"])
    groups: dict[tuple, dict] = {}
    for r in rows:
        target = _snr_target_of(r["file"])
        key = (r["algorithm"], r["variant"],
               _fmt_snr(target) if target is not None else "")
        g = groups.setdefault(key, {"improvement": [], "output": [],
                                    "segsnr": [], "pesq": []})
        g["improvement"].append(float(r["improvement_db"]))
        g["output"].append(float(r["output_snr_db"]))
        g["segsnr"].append(float(r["segsnr_db"]))
        p = pesq.get((r["file"], r["algorithm"], r["variant"]))
        if p is not None:
            g["pesq"].append(p)
    out_path = Path(cfg.output_dir) / "report.csv"
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algorithm", "variant", "input_snr_db", "n",
                    "mean_improvement_db", "mean_output_snr_db",
                    "mean_segsnr_db", "mean_pesq"])
        for key in sorted(groups):
            g = groups[key]
            mean_pesq = (f"{np.mean(g['pesq']):.4f}" if g["pesq"] else "")
            w.writerow([*key, len(g["improvement"]),
                        f"{np.mean(g['improvement']):.4f}",
                        f"{np.mean(g['output']):.4f}",
                        f"{np.mean(g['segsnr']):.4f}", mean_pesq])
    print(f"report written to {out_path}")
    return 0


def cmd_mos_serve(args) -> int:
    import uvicorn

    from .mos_service import create_app

    app = create_app(clips_dir=args.clips, state_dir=args.state_dir,
                     static_dir=args.static_dir, seed=args.seed)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _finish(stage: str, ok: int, failures: list) -> int:
    if failures:
        print(f"{stage}: {ok} succeeded, {len(failures)} failed:", file=sys.stderr)
        for name, reason in failures:
            print(f"  {name}: {reason}", file=sys.stderr)
        return 1
    print(f"{stage}: {ok} outputs")
    return 0


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--clean-dir", dest="clean_dir")
    p.add_argument("--noise-file", dest="noise_file",
                   help="noise WAV; looped if shorter than the clean file")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--snr-targets", dest="snr_targets", type=float, nargs="+")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)


def _config_from(args) -> ExperimentConfig:
    keys = ["clean_dir", "noise_file", "output_dir", "snr_targets", "seed",
            "jobs", "families", "kinds", "methods", "modes", "algorithms",
            "vad_features"]
    overrides = {k: getattr(args, k, None) for k in keys}
    return ExperimentConfig.load(args.config, overrides)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="denoise-bench",
        description="Wavelet vs adaptive-filter speech denoising benchmark")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mix = sub.add_parser("mix", help="mix clean corpus with noise at SNR targets")
    _add_config_args(p_mix)

    p_den = sub.add_parser("denoise", help="run a denoising grid")
    _add_config_args(p_den)
    p_den.add_argument("--method", choices=["wavelet", "adaptive"], required=True)
    p_den.add_argument("--families", nargs="+", choices=list(FAMILIES))
    p_den.add_argument("--kinds", nargs="+", choices=["dwt", "wpt"])
    p_den.add_argument("--methods", nargs="+",
                       choices=["universal", "balance_sparsity"])
    p_den.add_argument("--modes", nargs="+", choices=["soft", "hard"])
    p_den.add_argument("--algorithms", nargs="+", choices=list(ALGORITHMS))
    p_den.add_argument("--vad-features", dest="vad_features", nargs="+",
                       choices=["energy", "cepstral"])

    p_eval = sub.add_parser("eval", help="score denoised corpus, write results CSV")
    _add_config_args(p_eval)

    p_rep = sub.add_parser("report", help="grouped summary of the results CSV")
    _add_config_args(p_rep)
    p_rep.add_argument("--results-csv")
    p_rep.add_argument("--pesq-csv", help="merge externally computed PESQ scores")

    p_srv = sub.add_parser("mos-serve", help="serve the MOS listening test")
    p_srv.add_argument("--clips", required=True, help="directory of WAV clips")
    p_srv.add_argument("--state-dir", default="mos_state")
    p_srv.add_argument("--static-dir", help="webapp static files")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8321)
    p_srv.add_argument("--seed", type=int)

    args = parser.parse_args(argv)
    try:
        if args.command == "mix":
            return cmd_mix(_config_from(args))
        if args.command == "denoise":
            return cmd_denoise(_config_from(args), args.method)
        if args.command == "eval":
            return cmd_eval(_config_from(args))
        if args.command == "report":
            return cmd_report(_config_from(args), args.results_csv, args.pesq_csv)
        if args.command == "mos-serve":
            return cmd_mos_serve(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
