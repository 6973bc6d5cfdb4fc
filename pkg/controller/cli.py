# -*- coding: utf-8 -*-
"""
Command Line Interface - train, calibrate, attack, evaluate, squeeze and toy-data subcommands
Logs go to stderr; machine-readable results (attack outcomes, table rows) go to stdout.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from config import APP_INFO, EXPORT_CONFIG, LOGGING_CONFIG, TRAINING_CONFIG, get_setting, validate_config
from core.attack import CwEadConfig, FgsmConfig, TargetMode, cw_ead_attack, fgsm, ifgsm, select_target
from core.detect import false_positive_rate, is_adversarial, load_detector, save_detector
from core.nn import ARCHITECTURES, TrainConfig, build_model, load_model, predict_labels, predict_probs, save_model, train
from core.squeeze import Squeezer, SqueezerKind, apply_squeezer
from core.data import make_toy_dataset, write_mnist_idx
from core.data_transform import export_report, table_row
from utils.logging_helpers import get_logger, log_error_context, setup_logging
from utils.performance_monitor import get_performance_summary, monitor

from .experiment_config import ATTACKS, load_experiment_config
from .experiment_controller import ExperimentController, calibrate_for, load_split

logger = get_logger(__name__)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_train(args: argparse.Namespace) -> int:
    config = load_experiment_config(args.config)
    output = args.output or config.model_path
    if not output:
        raise ValueError("No model output path: pass --output or set MODEL_PATH")
    train_set = load_split(config, "train")
    test_set = load_split(config, "test")

    model = build_model(args.arch or config.dataset, train_set.image_shape, train_set.num_classes, args.seed)
    train_config = TrainConfig(lr=args.lr, batch_size=args.batch_size, epochs=args.epochs, seed=args.seed)
    with monitor.section("train", sla_category="training"):
        model = train(model, train_set, train_config, test_set)
    save_model(model, output)
    logger.info(f"Saved model to {output}")
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    config = load_experiment_config(args.config)
    if args.calibration_size is not None:
        config.calibration_size = args.calibration_size
    if args.target_fpr is not None:
        config.target_fpr = args.target_fpr
    output = args.output or config.detector_path or str(
        Path(EXPORT_CONFIG["output_dir"]) / f"{config.dataset}_detector.json")

    model = load_model(config.model_path)
    detector = calibrate_for(config, model, load_split(config, "train"))
    save_detector(detector, output)

    test_set = load_split(config, "test")
    correct = predict_labels(model, test_set.images) == test_set.labels
    held_out = test_set.images[correct][:config.calibration_size]
    if len(held_out):
        fpr = false_positive_rate(detector, model, held_out)
        logger.info(f"Held-out FPR on {len(held_out)} correctly classified test images: {fpr:.2%}")
    return 0


def cmd_attack(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    x0 = np.load(args.image).astype(np.float64)
    if x0.shape != model.input_shape:
        raise ValueError(f"Image shape {x0.shape} does not match model input {model.input_shape}")

    spec = select_target(predict_probs(model, x0), args.label, args.target_mode)
    if args.attack == "fgsm":
        outcome = fgsm(model, x0, spec, FgsmConfig(args.strength, steps=1))
    elif args.attack == "ifgsm":
        outcome = ifgsm(model, x0, spec, FgsmConfig(args.strength, args.steps))
    elif args.attack == "cw":
        outcome = cw_ead_attack(model, x0, spec, CwEadConfig.cw(
            args.strength, iterations=args.iterations, binary_search_steps=args.binary_search_steps))
    else:
        outcome = cw_ead_attack(model, x0, spec, CwEadConfig.ead(
            args.strength, args.beta, iterations=args.iterations, binary_search_steps=args.binary_search_steps))

    if args.detector:
        detector = load_detector(args.detector, model)
        flagged, score = is_adversarial(detector, model, outcome.adversarial)
        outcome.detector_bypassed, outcome.detector_score = not flagged, score
    if args.output:
        np.save(args.output, outcome.adversarial)

    l1, l2, linf = outcome.distortion
    print(json.dumps({
        "attack": args.attack,
        "target_mode": args.target_mode,
        "strength": args.strength,
        "true_label": spec.true_label,
        "target": spec.resolved_target,
        "predicted_label": outcome.predicted_label,
        "model_fooled": outcome.model_fooled,
        "detector_bypassed": outcome.detector_bypassed,
        "detector_score": outcome.detector_score,
        "l1": l1, "l2": l2, "linf": linf,
        "final_c": outcome.final_c,
    }, sort_keys=True))
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = load_experiment_config(args.config)
    if args.output:
        config.output_path = args.output
    controller = ExperimentController(config)
    rows = controller.run_experiment()
    timing = get_performance_summary(f"{config.attack}_sweep")
    logger.info(f"Wrote {config.output_path}; longest {config.attack} sweep so far "
                f"{timing.get('max_duration', 0.0):.1f}s")

    if args.export:
        export_report(rows, args.export)
    if args.table_row:
        print(json.dumps(table_row(rows).to_dict(), sort_keys=True))
    return 0


def cmd_squeeze(args: argparse.Namespace) -> int:
    kind = SqueezerKind(args.kind)
    if kind is SqueezerKind.BIT_DEPTH:
        squeezer = Squeezer.bit_depth(args.bits)
    elif kind is SqueezerKind.MEDIAN:
        squeezer = Squeezer.median(args.window)
    else:
        squeezer = Squeezer.nlm(args.search, args.patch, args.bandwidth)

    image = np.load(args.input).astype(np.float64)
    # a bare (H, W) array is treated as one channel
    squeezed = apply_squeezer(squeezer, image[None] if image.ndim == 2 else image)
    np.save(args.output, squeezed[0] if image.ndim == 2 else squeezed)
    logger.info(f"Applied {squeezer.name} to {args.input}, wrote {args.output}")
    return 0


TOY_EXPERIMENT = """# Toy smoke pipeline (written by the toy-data subcommand)
DATASET=mnist
TRAIN_IMAGES=data/train-images.idx.gz
TRAIN_LABELS=data/train-labels.idx.gz
TEST_IMAGES=data/test-images.idx.gz
TEST_LABELS=data/test-labels.idx.gz
MODEL_PATH=models/toy.nnm
DETECTOR_PATH=models/toy_detector.json
OUTPUT_PATH=reports/toy_ifgsm.csv
ATTACK=ifgsm
STRENGTH_GRID=0.3,0.6
SAMPLE_SIZE=5
CALIBRATION_SIZE=50
MAX_WORKERS=1
"""


def cmd_toy_data(args: argparse.Namespace) -> int:
    root = Path(args.output_dir)
    for split, n, seed in (("train", args.train_size, args.seed), ("test", args.test_size, args.seed + 1)):
        dataset = make_toy_dataset(n=n, num_classes=args.num_classes, seed=seed, split=split)
        write_mnist_idx(dataset, root / "data" / f"{split}-images.idx.gz", root / "data" / f"{split}-labels.idx.gz")
    config_path = root / "toy_ifgsm.cfg"
    config_path.write_text(TOY_EXPERIMENT)
    logger.info(f"Wrote toy IDX files and {config_path}")
    print(config_path)
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeeze-bypass", description=APP_INFO["description"])
    parser.add_argument("--log-level", default=get_setting("SQUEEZE_LOG_LEVEL", LOGGING_CONFIG["level"]),
                        help="DEBUG, INFO, WARNING or ERROR (env SQUEEZE_LOG_LEVEL)")
    parser.add_argument("--log-file", action="store_true", help="Also log to a file under local-reports/logs")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("train", help="Train a model on the configured dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--arch", choices=sorted(ARCHITECTURES), help="Defaults to the dataset's architecture")
    p.add_argument("--epochs", type=int, default=TRAINING_CONFIG["epochs"])
    p.add_argument("--lr", type=float, default=TRAINING_CONFIG["lr"])
    p.add_argument("--batch-size", type=int, default=TRAINING_CONFIG["batch_size"])
    p.add_argument("--seed", type=int, default=TRAINING_CONFIG["seed"])
    p.add_argument("--output", help="Model file; defaults to MODEL_PATH")
    p.set_defaults(handler=cmd_train)

    p = subparsers.add_parser("calibrate", help="Calibrate the joint detector for a trained model")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="Detector file; defaults to DETECTOR_PATH")
    p.add_argument("--calibration-size", type=int)
    p.add_argument("--target-fpr", type=float)
    p.set_defaults(handler=cmd_calibrate)

    p = subparsers.add_parser("attack", help="Attack one image and print the outcome as JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--image", required=True, help=".npy array of shape (C, H, W) in [0, 1]")
    p.add_argument("--label", type=int, required=True)
    p.add_argument("--attack", choices=ATTACKS, default="ead")
    p.add_argument("--target-mode", choices=[m.value for m in TargetMode], default=TargetMode.NONTARGETED.value)
    p.add_argument("--strength", type=float, required=True, help="kappa for cw/ead, epsilon for fgsm/ifgsm")
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--binary-search-steps", type=int, default=9)
    p.add_argument("--steps", type=int, default=10, help="I-FGSM iterations")
    p.add_argument("--detector")
    p.add_argument("--output", help="Write the adversarial image to this .npy file")
    p.set_defaults(handler=cmd_attack)

    p = subparsers.add_parser("evaluate", help="Run a strength sweep and write the CSV report")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="CSV path; defaults to OUTPUT_PATH")
    p.add_argument("--table-row", action="store_true",
                   help="Print the lowest strength reaching the highest ASR")
    p.add_argument("--export", help="Also export rows to a .json or .xlsx file")
    p.set_defaults(handler=cmd_evaluate)

    p = subparsers.add_parser("squeeze", help="Apply one squeezer to a .npy image")
    p.add_argument("--kind", choices=[k.value for k in SqueezerKind], required=True)
    p.add_argument("--bits", type=int, default=1)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--search", type=int, default=13)
    p.add_argument("--patch", type=int, default=3)
    p.add_argument("--bandwidth", type=float, default=2.0)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_squeeze)

    p = subparsers.add_parser("toy-data", help="Write a small synthetic IDX dataset and an experiment file for it")
    p.add_argument("--output-dir", default=str(Path(EXPORT_CONFIG["output_dir"]) / "toy"))
    p.add_argument("--train-size", type=int, default=200)
    p.add_argument("--test-size", type=int, default=100)
    p.add_argument("--num-classes", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_toy_data)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; 0 on success, 1 on runtime or config errors, 2 on usage errors"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    setup_logging(level=args.log_level, log_to_file=args.log_file)
    valid, message = validate_config()
    if not valid:
        logger.error(message)
        print(f"error: {message}", file=sys.stderr)
        return 1

    try:
        return args.handler(args)
    except (ValueError, FileNotFoundError, OSError) as e:
        log_error_context(logger, e, {"command": args.command})
        print(f"error: {e}", file=sys.stderr)
        return 1
