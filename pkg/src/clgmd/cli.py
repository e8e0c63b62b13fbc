"""Command-line front end: detect, generate, simulate.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
3 data error (corrupt or inconsistent frames).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from .config import RunConfig, config_from_mappings, load_config_file
from .detector import CollisionDetector
from .errors import ConfigError, DataError, InputError, UsageError
from .layers import Frame
from .pgm import list_sequence, read_pgm, write_sequence
from .steering import select_escape
from .stimulus import CameraModel, Direction, ScenarioSpec, generate_sequence
from .flightsim import run_trial, write_trace_csv

DETECT_COLUMNS = "frame,kappa,u,d,l,r,spike,confirmed,escape_axis,escape_value".split(",")


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as exit code 1."""

    def error(self, message):
        raise UsageError(message)


def _override_mapping(pairs: list[str]) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--set expects KEY=VALUE, got {pair!r}")
        key, _, value = pair.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def _load_run_config(args) -> RunConfig:
    mappings = []
    if args.config is not None:
        mappings.append(load_config_file(args.config))
    mappings.append(_override_mapping(args.overrides))
    return config_from_mappings(*mappings)


def cmd_detect(args) -> int:
    cfg = _load_run_config(args)
    paths = list_sequence(args.frames_dir)
    first = read_pgm(paths[0])
    height, width = first.shape
    detector = CollisionDetector(
        width, height, core=cfg.core_params(), norm=cfg.norm_params(width, height)
    )
    steering = cfg.steering_params()
    rows = 0
    with open(args.out, "w", newline="\n") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DETECT_COLUMNS)
        for index, path in enumerate(paths):
            img = first if index == 0 else read_pgm(path)
            try:
                result = detector.process(Frame(index=index, luminance=img))
            except InputError as exc:
                raise DataError(f"{path}: {exc}") from exc
            if result is None:
                continue
            p = result.potentials
            escape = select_escape(p, steering)
            writer.writerow(
                [
                    result.frame_index,
                    f"{p.kappa:.6f}",
                    f"{p.u:.6f}",
                    f"{p.d:.6f}",
                    f"{p.l:.6f}",
                    f"{p.r:.6f}",
                    int(result.spike),
                    int(result.confirmed),
                    escape.axis.value,
                    f"{escape.value:.6f}",
                ]
            )
            rows += 1
    print(f"processed {len(paths)} frames, wrote {rows} rows to {args.out}")
    return 0


def cmd_generate(args) -> int:
    spec = ScenarioSpec(
        direction=Direction(args.direction),
        speed=args.speed,
        distance=args.distance,
        fps=args.fps,
        frames=args.frames,
        seed=args.seed,
        noise_amplitude=args.noise,
    )
    camera = CameraModel(
        hfov=math.radians(args.hfov_deg), width=args.width, height=args.height
    )
    frames = generate_sequence(spec, camera)
    manifest = {
        "direction": spec.direction.value,
        "speed": spec.speed,
        "distance": spec.distance,
        "fps": spec.fps,
        "frames": spec.frames,
        "seed": spec.seed,
        "noise_amplitude": spec.noise_amplitude,
        "object_radius": spec.object_radius,
        "object_luminance": spec.object_luminance,
        "background": spec.background,
        "entry_fraction": spec.entry_fraction,
        "width": camera.width,
        "height": camera.height,
        "hfov_deg": args.hfov_deg,
    }
    write_sequence(args.out_dir, (f.luminance for f in frames), manifest)
    print(f"wrote {len(frames)} frames to {args.out_dir}")
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_run_config(args)
    trace = run_trial(cfg.trial_config())
    write_trace_csv(trace, args.out)
    print(f"OUTCOME={trace.outcome.value}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="clgmd",
        description="Competitive looming detection: run it on frame sequences, "
        "generate synthetic stimuli, or fly a closed-loop avoidance trial.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    detect = sub.add_parser("detect", help="run the detector over a PGM sequence")
    detect.add_argument("frames_dir", help="directory of numbered P5 PGM frames")
    detect.add_argument("--config", default=None, help="key=value config file")
    detect.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )
    detect.add_argument("--out", default="detections.csv", help="output CSV path")
    detect.set_defaults(func=cmd_detect)

    generate = sub.add_parser("generate", help="write a synthetic stimulus sequence")
    generate.add_argument("out_dir", help="output directory for frames + manifest")
    generate.add_argument(
        "--direction",
        choices=[d.value for d in Direction],
        default=Direction.HEAD_ON.value,
    )
    generate.add_argument("--speed", type=float, default=1.2, help="m/s, <0 recedes")
    generate.add_argument("--distance", type=float, default=4.0, help="start distance m")
    generate.add_argument("--frames", type=int, default=120)
    generate.add_argument("--fps", type=float, default=50.0)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument(
        "--noise", type=float, default=0.0, help="uniform noise amplitude, try 5.0"
    )
    generate.add_argument("--width", type=int, default=100)
    generate.add_argument("--height", type=int, default=100)
    generate.add_argument("--hfov-deg", type=float, default=90.0)
    generate.set_defaults(func=cmd_generate)

    simulate = sub.add_parser("simulate", help="run one closed-loop avoidance trial")
    simulate.add_argument("--config", default=None, help="key=value config file")
    simulate.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )
    simulate.add_argument("--out", default="trace.csv", help="trace CSV path")
    simulate.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (DataError, InputError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
