"""
Command-line interface.

Subcommands:
    asm     assemble source (register: text to .gnfb; stack: parse check)
    disasm  render a .gnfb file as .gnf text
    run     execute one program and print its output and metrics
    bench   run the corpus and print a comparison report
    oracle  print the expected dispatch count of a corpus case

Exit codes: 0 success, 1 runtime error, 2 assembly/format/config/file error,
3 oracle mismatch under `bench --verify`.
"""

import argparse
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv
from pydantic import ValidationError

from . import __version__
from .bench import (
    CASE_NAMES,
    assemble,
    emit,
    execute,
    expected_dispatches,
    instruction_mix,
    resolve_suite,
    run_suite,
)
from .config import BenchConfig, LabConfig, configure_logging
from .errors import AssemblyError, CodecError, HarnessError, VMRuntimeError
from .register_vm import (
    MAGIC,
    decode_register_program,
    disassemble_register_program,
    encode_register_program,
    parse_register_source,
)
from .stack_vm import format_stack_program, parse_stack_source

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INPUT = 2
EXIT_ORACLE_MISMATCH = 3

_EXTENSIONS = {".fng": "stack", ".gnf": "register", ".gnfb": "register"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vm-dispatch-lab",
        description="Stack vs register virtual machine dispatch benchmarks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    asm = sub.add_parser("asm", help="Assemble a source file")
    asm.add_argument("--vm", choices=["stack", "register"], required=True)
    asm.add_argument("source", type=Path)
    asm.add_argument("-o", "--output", type=Path, default=None)

    disasm = sub.add_parser("disasm", help="Disassemble a .gnfb file")
    disasm.add_argument("binary", type=Path)

    run = sub.add_parser("run", help="Execute one program")
    run.add_argument("--vm", choices=["stack", "register"], default=None)
    run.add_argument("--counts-only", action="store_true", help="Disable per-instruction clocks")
    run.add_argument("program", type=Path)

    bench = sub.add_parser("bench", help="Run the benchmark corpus")
    bench.add_argument("--suite", default="all", help=f"all or one of {', '.join(CASE_NAMES)}")
    bench.add_argument("--reps", type=int, default=None, help="Measured runs per case")
    bench.add_argument("--warmup", type=int, default=None, help="Discarded runs per case")
    bench.add_argument("--format", choices=["json", "csv", "markdown"], default=None)
    bench.add_argument("--counts-only", action="store_true", help="Disable per-instruction clocks")
    bench.add_argument("--verify", action="store_true", help="Exit 3 on any oracle mismatch")

    oracle = sub.add_parser("oracle", help="Print the expected dispatch count of a corpus case")
    oracle.add_argument("name")
    oracle.add_argument("--vm", choices=["stack", "register"], required=True)

    return parser


def _cmd_asm(args: argparse.Namespace, config: LabConfig) -> int:
    text = args.source.read_text()
    if args.vm == "register":
        program = parse_register_source(text, config.register_vm.memory_size)
        data = encode_register_program(program)
        output = args.output or args.source.with_suffix(".gnfb")
        output.write_bytes(data)
        print(f"{output}: {len(program.instrs)} instructions, {len(data)} bytes")
        return EXIT_OK

    stack_program = parse_stack_source(text)
    if args.output is not None:
        args.output.write_text(format_stack_program(stack_program))
    print(f"{args.source}: {stack_program.instruction_count} instructions OK")
    return EXIT_OK


def _cmd_disasm(args: argparse.Namespace, config: LabConfig) -> int:
    program = decode_register_program(args.binary.read_bytes())
    sys.stdout.write(disassemble_register_program(program))
    return EXIT_OK


def _load_program(path: Path, vm: str | None, config: LabConfig):
    vm = vm or _EXTENSIONS.get(path.suffix.lower())
    if vm is None:
        raise ValueError(f"Cannot infer the machine for '{path}'; pass --vm")
    data = path.read_bytes()
    if vm == "register" and data.startswith(MAGIC):
        return decode_register_program(data)
    return assemble(vm, data.decode(), config.register_vm.memory_size)


def _cmd_run(args: argparse.Namespace, config: LabConfig) -> int:
    if args.counts_only:
        config = config.with_fine_timing(False)
    program = _load_program(args.program, args.vm, config)
    result = execute(program, config)

    for line in result.output:
        print(line)

    metrics = result.metrics
    print(f"dispatches: {metrics.dispatch_count}")
    print(f"fetches: {metrics.fetch_count}")
    if not args.counts_only:
        print(f"fetch time: {metrics.fetch_time_us:.3f} us")
        print(f"dispatch time: {metrics.dispatch_time_us:.3f} us")
        print(f"execution time: {metrics.exec_time_us:.3f} us")
    mix = instruction_mix(program)
    print(f"opcodes: {sum(mix.values())} ({', '.join(f'{k} {v}' for k, v in mix.items())})")
    if result.result is not None:
        print(f"result: {result.result.render()}")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace, config: LabConfig) -> int:
    update: dict[str, object] = {}
    if args.reps is not None:
        update["repetitions"] = args.reps
    if args.warmup is not None:
        update["warmup"] = args.warmup
    if args.format is not None:
        update["output_format"] = args.format
    if args.counts_only:
        update["fine_timing"] = False
    # revalidate so flags get the same bounds as the environment
    bench = BenchConfig.model_validate(config.bench.model_dump() | update)

    report = run_suite(resolve_suite(args.suite), bench, config)
    sys.stdout.write(emit(report, bench.output_format))

    if args.verify and not report.all_match:
        logger.error("Oracle mismatch in benchmark results")
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace, config: LabConfig) -> int:
    print(expected_dispatches((args.name, args.vm)))
    return EXIT_OK


_COMMANDS = {
    "asm": _cmd_asm,
    "disasm": _cmd_disasm,
    "run": _cmd_run,
    "bench": _cmd_bench,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    """Console entry point; returns the process exit code."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        config = LabConfig.from_env()
        return _COMMANDS[args.command](args, config)
    except VMRuntimeError as e:
        logger.error(f"Runtime error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except (AssemblyError, CodecError, HarnessError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
