import json
import logging
import os
from fractions import Fraction

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from layerlat.algebra.bunch import Bunch, parse_bunch, serialize_bunch
from layerlat.algebra.chain import Chain
from layerlat.conf import get_setting
from layerlat.constructions.decompose import (
    chain_table,
    chain_window,
    decompose_table,
    parse_table,
    roundtrip_table,
    serialize_table,
    serialize_window,
)
from layerlat.constructions.densify import densify_driver, fill_gap, trace_to_json
from layerlat.constructions.embed import check_embedding, parse_embedding
from layerlat.constructions.standardize import cantor_map, serialize_placement, sup_extend
from layerlat.exceptions import LayerLatError
from layerlat.oracle import check_chain_laws, enumerate_finite_chains

logger = logging.getLogger(__name__)

USAGE_ERROR = 2


class Command(BaseCommand):
    help = "Validate, evaluate, decompose, embed, densify and standardize bunches of layer groups"
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=None, help="seed of every sampler")
        parser.add_argument("--samples", type=int, default=None, help="sample count of the checkers")
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        validate = subparsers.add_parser("validate", help="validate a bunch file")
        validate.add_argument("bunch")
        validate.add_argument("--laws", action="store_true", help="also check the FL_e laws of its chain")

        subparsers.add_parser("type", help="print the type of a bunch").add_argument("bunch")
        subparsers.add_parser("bounded", help="print whether the chain is bounded").add_argument("bunch")

        evaluate = subparsers.add_parser("eval", help="evaluate an operation of the chain")
        evaluate.add_argument("bunch")
        evaluate.add_argument("--op", required=True, choices=["mul", "neg", "res", "cmp"])
        evaluate.add_argument("--lhs", required=True)
        evaluate.add_argument("--rhs")

        table = subparsers.add_parser("table", help="export the Cayley table or a window of it")
        table.add_argument("bunch")
        table.add_argument("--limit", type=int)
        table.add_argument("--format", default="csv", choices=["csv", "json", "dot"])

        decompose = subparsers.add_parser("decompose", help="decompose a finite Cayley table")
        decompose.add_argument("table")
        decompose.add_argument("--output")

        embed = subparsers.add_parser("embed-check", help="check an embedding between two chains")
        embed.add_argument("source")
        embed.add_argument("target")
        embed.add_argument("spec")

        gap = subparsers.add_parser("fill-gap", help="insert an element between x < y")
        gap.add_argument("bunch")
        gap.add_argument("--x", required=True)
        gap.add_argument("--y", required=True)
        gap.add_argument("--output")

        densify = subparsers.add_parser("densify", help="separate the pairs of an enumerated prefix")
        densify.add_argument("bunch")
        densify.add_argument("--prefix", type=int, default=10)
        densify.add_argument("--rounds", type=int, default=1)
        densify.add_argument("--output")

        enumerate_ = subparsers.add_parser("enumerate", help="enumerate finite chains")
        enumerate_.add_argument("--size", type=int, required=True)
        enumerate_.add_argument("--output-dir", help="write one table file per chain into this directory")

        standardize = subparsers.add_parser("standardize", help="place a bounded chain in [0, 1]")
        standardize.add_argument("bunch")
        standardize.add_argument("--prefix", type=int, default=10)
        standardize.add_argument("--depth", type=int)

    def handle(self, *args, **options):
        self.seed = options["seed"] if options["seed"] is not None else get_setting("LAYERLAT_SEED")
        self.samples = options["samples"]
        subcommand = options["subcommand"]
        handler = getattr(self, "handle_" + subcommand.replace("-", "_"))
        try:
            handler(options)
        except (LayerLatError, ValidationError) as e:
            logger.exception("layerlat %s failed", subcommand)
            message = "; ".join(e.messages) if isinstance(e, ValidationError) else str(e)
            raise CommandError(message, returncode=1) from e

    # helpers

    def read(self, path: str) -> str:
        try:
            with open(path) as f:
                return f.read()
        except OSError as e:
            raise CommandError(f"cannot read {path}: {e.strerror}", returncode=1) from e

    def write_document(self, text: str, path: str = None) -> None:
        if path is None:
            self.stdout.write(text, ending="")
            return
        try:
            with open(path, "w") as f:
                f.write(text)
        except OSError as e:
            raise CommandError(f"cannot write {path}: {e.strerror}", returncode=1) from e

    def load_bunch(self, path: str) -> Bunch:
        bunch = parse_bunch(self.read(path))
        bunch.full_clean(samples=self.samples)
        return bunch

    def load_chain(self, path: str) -> Chain:
        return Chain(self.load_bunch(path))

    # sub-commands

    def handle_validate(self, options):
        bunch = parse_bunch(self.read(options["bunch"]))
        report = bunch.validate(samples=self.samples, seed=self.seed)
        for line in report.lines():
            self.stdout.write(line)
        ok = report.ok

        if options["laws"] and report.ok:
            laws = check_chain_laws(Chain(bunch), seed=self.seed)
            method = "exhaustive" if laws.exhaustive else "sampled"
            self.stdout.write(f"laws: {'ok' if laws.passed else 'FAIL'} ({laws.checked} triples, {method})")
            for failure in laws.failures:
                self.stdout.write(f"  {failure}")
            ok = ok and laws.passed

        if not ok:
            raise CommandError("the bunch is not valid", returncode=1)

    def handle_type(self, options):
        self.stdout.write(self.load_bunch(options["bunch"]).bunch_type().value)

    def handle_bounded(self, options):
        chain = self.load_chain(options["bunch"])
        bounds = chain.is_bounded()
        if not bounds:
            self.stdout.write("false")
            return
        self.stdout.write("true")
        self.stdout.write(f"top {chain.format_element(bounds.top)}")
        self.stdout.write(f"bottom {chain.format_element(bounds.bottom)}")

    def handle_eval(self, options):
        chain = self.load_chain(options["bunch"])
        op = options["op"]
        lhs = chain.parse_element(options["lhs"], field="lhs")
        if op == "neg":
            self.stdout.write(chain.format_element(chain.negate(lhs)))
            return
        if options["rhs"] is None:
            raise CommandError(f"--op {op} needs --rhs", returncode=USAGE_ERROR)
        rhs = chain.parse_element(options["rhs"], field="rhs")
        if op == "cmp":
            self.stdout.write(chain.elem_compare(lhs, rhs).name)
        elif op == "mul":
            self.stdout.write(chain.format_element(chain.mul(lhs, rhs)))
        else:
            self.stdout.write(chain.format_element(chain.residuum(lhs, rhs)))

    def handle_table(self, options):
        chain = self.load_chain(options["bunch"])
        limit, output_format = options["limit"], options["format"]
        if limit is None:
            if not chain.is_finite():
                raise CommandError("the chain is infinite, export a window with --limit", returncode=1)
            if output_format == "csv":
                self.write_document(serialize_table(chain_table(chain)[0]))
                return
            limit = len(chain.elements())
        self.write_document(serialize_window(chain, chain_window(chain, limit), output_format))

    def handle_decompose(self, options):
        table = parse_table(self.read(options["table"]))
        result = decompose_table(table)
        witness = roundtrip_table(table, result)
        self.write_document(serialize_bunch(result.bunch), options["output"])
        report = self.stdout if options["output"] else self.stderr
        report.write(f"round trip: {witness.cells} cells ok")
        for index, element in sorted(witness.bijection.items()):
            report.write(f"  {index} -> {Chain(result.bunch).format_element(element)}")

    def handle_embed_check(self, options):
        source = self.load_bunch(options["source"])
        target = self.load_bunch(options["target"])
        spec = parse_embedding(self.read(options["spec"]), source, target)
        report = check_embedding(Chain(source), Chain(target), spec, samples=self.samples, seed=self.seed)
        for line in report.lines():
            self.stdout.write(line)
        if not report.ok:
            raise CommandError("the map is not an embedding", returncode=1)

    def handle_fill_gap(self, options):
        chain = self.load_chain(options["bunch"])
        x = chain.parse_element(options["x"], field="x")
        y = chain.parse_element(options["y"], field="y")
        result = fill_gap(chain, x, y)
        self.write_document(serialize_bunch(result.receipt.new_bunch), options["output"])
        report = self.stdout if options["output"] else self.stderr
        report.write(f"case {result.case_tag}")
        report.write(f"witness {result.chain.format_element(result.witness)}")

    def handle_densify(self, options):
        chain = self.load_chain(options["bunch"])
        bunch, trace = densify_driver(chain, prefix=options["prefix"], rounds=options["rounds"])
        self.write_document(serialize_bunch(bunch), options["output"])
        report = self.stdout if options["output"] else self.stderr
        report.write(json.dumps(trace_to_json(trace), indent=2))

    def handle_enumerate(self, options):
        size, directory = options["size"], options["output_dir"]
        tables = enumerate_finite_chains(size)
        if directory is None:
            if len(tables) > 1:
                raise CommandError(f"{len(tables)} chains with {size} elements, pass --output-dir", returncode=1)
            for table in tables:
                self.write_document(serialize_table(table))
        else:
            try:
                os.makedirs(directory, exist_ok=True)
            except OSError as e:
                raise CommandError(f"cannot write {directory}: {e.strerror}", returncode=1) from e
            for index, table in enumerate(tables, start=1):
                path = os.path.join(directory, f"size{size}-{index}.csv")
                self.write_document(serialize_table(table), path)
                self.stdout.write(path)
        self.stderr.write(f"{len(tables)} chain(s) with {options['size']} elements")

    def handle_standardize(self, options):
        chain = self.load_chain(options["bunch"])
        placement = cantor_map(chain, options["prefix"])
        self.write_document(serialize_placement(chain, placement))
        if options["depth"] is not None:
            values = sorted({q for _, q in placement.pairs})
            for a in values:
                for b in values:
                    sup = sup_extend(chain, placement, Fraction(a), Fraction(b), options["depth"])
                    self.stderr.write(f"sup {a} {b} {sup}")
