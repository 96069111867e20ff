"""The `mlc` subcommands. Each one parses its documents, runs one construction and
renders a JSON or CSV report."""

import json
import os
import sys
from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace, _SubParsersAction
from logging import getLogger
from typing import Any, Dict, List, Optional, Sequence, Type

import numpy as np
import pandas as pd

from mlcech import inputformat
from mlcech.cech import build_complex, cohomology
from mlcech.contour import NumericPart
from mlcech.errors import StabilizationError
from mlcech.exact import INF, FnDivisor, principal_part_at
from mlcech.inputformat import parse_input
from mlcech.p1 import (
    DivisorP1,
    MLDistribution,
    TruncationPolicy,
    betti_numbers,
    hodge_diamond,
    ml_obstruction,
    ml_solve,
    od_table,
    omega1_cech,
    riemann_roch_check,
    skyscraper_step,
)
from mlcech.plane import (
    MLSeries,
    assemble,
    evaluate_grid,
    group_poles,
    verify_principal_part,
)
from mlcech.rwreport import (
    GRID_COLUMNS,
    RR_COLUMNS,
    TABLE_COLUMNS,
    ColumnSpecs,
    df_count_na,
    df_drop_duplicates,
    dumps,
    encode,
    key_value_frame,
    to_csv,
    to_frame,
    write_report,
)
from mlcech.settings import Settings, load_settings
from mlcech.torus import (
    TorusDistribution,
    WeierstrassContext,
    check_periodicity,
    legendre_error,
    local_coefficient_error,
    residue_test,
    torus_solve,
    weierstrass_identity_error,
)

logger = getLogger(__name__)

FORMATS = ("json", "csv")


class Command(ABC):
    """A subcommand: parse arguments in `__init__`, build the report in `report`.

    Attributes: Class Attributes
        columns (Optional[List[ColumnSpecs]]): The CSV columns of the report's
            rows, `None` if the report has no table.

    Attributes:
        output (Optional[str]): The path of the report, stdout if `None`.
        format (str): "json" or "csv".
        settings (Settings): The numerical settings.
    """

    columns: Optional[List[ColumnSpecs]] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """The CLI name; subclasses set it as a class attribute.
        Reference: https://stackoverflow.com/a/53417582.
        """
        raise NotImplementedError

    def get_name(self) -> str:
        """The CLI name, also used as the `command` field of reports."""
        return self.name

    @property
    @abstractmethod
    def aliases(self) -> List[str]:
        """Single-letter CLI aliases; subclasses set them as a class attribute."""
        raise NotImplementedError

    def get_aliases(self) -> List[str]:
        """The CLI aliases."""
        return self.aliases

    @classmethod
    def configure_common_args(cls, parser: ArgumentParser) -> None:
        """Configures the arguments that are used by all commands.

        Args:
            parser (ArgumentParser): The argument parser.
        """
        parser.add_argument(
            "-o",
            "--output",
            "--out",
            help="path of the report (default: stdout)",
        )
        parser.add_argument(
            "-f",
            "--format",
            choices=FORMATS,
            default="json",
            help="report format (default: %(default)s)",
        )
        parser.add_argument(
            "-c",
            "--config",
            help="JSON file of numerical settings",
        )
        parser.add_argument(
            "-s",
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one numerical setting; may be repeated",
        )
        parser.add_argument(
            "--explain",
            action="store_true",
            help="print the effective numerical settings instead of running",
        )

    @classmethod
    @abstractmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        pass

    @abstractmethod
    def __init__(self, args: Namespace) -> None:
        self._check_output(args.output)
        self.output = args.output
        self.format = args.format
        self.explain = args.explain
        if self.format == "csv" and self.columns is None:
            logger.info(f"{self.get_name()} has no table; CSV lists the report's keys")

        self.settings: Settings = load_settings(args.config, args.set)

    @staticmethod
    def _check_output(path: Optional[str]) -> None:
        """Check that `path` can be written.

        Args:
            path (Optional[str]): The report path.

        Raises:
            FileNotFoundError: If `path` is not in an existing directory.
        """
        if path is None or path == "-":
            return

        dir = os.path.dirname(path)
        if dir and not os.path.isdir(dir):
            raise FileNotFoundError(f"Directory '{dir}' does not exist")

    @abstractmethod
    def report(self) -> Dict[str, Any]:
        """Computes the report, table rows under the key "rows"."""

    def render(self) -> str:
        """The report, fully serialized."""
        report = self.report()
        if self.format == "json":
            return dumps(report, self.get_name())
        if self.columns is None:
            return to_csv(key_value_frame(report))
        return to_csv(to_frame(report["rows"], self.columns))

    def run(self) -> None:
        if not self.explain:
            text = self.render()
        elif self.format == "json":
            text = dumps(self.settings._asdict(), "explain")
        else:
            text = to_csv(key_value_frame(self.settings._asdict()))
        write_report(text, self.output)


class Cech(Command):
    """The `cech` command computes the Čech cohomology of a nerve with a sheaf datum.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.

    Attributes:
        input (str): The nerve document, inline or a path.
        representatives (bool): Also report cocycle representatives.
    """

    name: str = "cech"
    aliases: List[str] = ["c"]

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="compute Čech cohomology ranks of a finite cover",
            cmd_cls=Cech,
        )
        parser.add_argument(
            "-i", "--input", required=True, help="nerve document (JSON or .json path)"
        )
        parser.add_argument(
            "-r",
            "--representatives",
            action="store_true",
            help="also report cocycles spanning each cohomology group",
        )

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        self.input = args.input
        self.representatives = args.representatives

        logger.debug(f"instance variables: {vars(self)}")

    def report(self) -> Dict[str, Any]:
        nerve, datum = parse_input(self.input, inputformat.NERVE)
        cx = build_complex(nerve, datum)
        result = cohomology(cx, self.representatives)
        out: Dict[str, Any] = {"ranks": result.ranks, "spaces": cx.spaces}
        if self.representatives:
            out["representatives"] = result.representatives
        return out


class P1(Command):
    """The `p1` command computes h⁰ and h¹ of O(D) on ℙ¹ and checks Riemann-Roch.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.

    Attributes:
        divisor (str): The divisor document.
        window (Optional[int]): The truncation window M.
        add_point (Optional[str]): A point x whose skyscraper step D → D + [x]
            is also reported.
    """

    name: str = "p1"
    aliases: List[str] = ["p"]

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="check Riemann-Roch for a divisor on the projective line",
            cmd_cls=P1,
        )
        parser.add_argument(
            "--divisor", required=True, help='divisor, e.g. \'{"inf": 3, "1/2+i": -1}\''
        )
        parser.add_argument("-m", "--window", type=int, help="truncation window M")
        parser.add_argument(
            "--add-point", help="also report the change of (h0, h1) from D to D + [x]"
        )

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        self._check_window(args.window)
        self.divisor = args.divisor
        self.window = args.window
        self.add_point = args.add_point

        logger.debug(f"instance variables: {vars(self)}")

    @staticmethod
    def _check_window(window: Optional[int]) -> None:
        """Raises `ValueError` for a window below 3."""
        if window is not None and window < 3:
            raise ValueError(f"Window {window} is below the minimum 3")

    def _policy(self, divisor: FnDivisor) -> TruncationPolicy:
        if self.window is None:
            return TruncationPolicy.for_divisor(
                divisor, self.settings.window_margin, self.settings.stabilization_step
            )
        policy = TruncationPolicy(self.window, self.settings.stabilization_step)
        policy.check(divisor)
        return policy

    def report(self) -> Dict[str, Any]:
        divisor = parse_input(self.divisor, inputformat.DIVISOR)
        policy = self._policy(divisor)
        rr = riemann_roch_check(divisor, policy)
        out: Dict[str, Any] = {
            "divisor": divisor,
            "degree": rr.degree,
            "genus": rr.genus,
            "h0": rr.h0,
            "h1": rr.h1,
            "rr": rr.holds,
            "closed_form": {"h0": rr.closed_h0, "h1": rr.closed_h1},
            "window": policy.window,
        }
        if self.add_point is not None:
            point = inputformat.parse_point(self.add_point)
            before, after = skyscraper_step(divisor, point, policy)
            out["skyscraper"] = {
                "point": point,
                "before": before,
                "after": after,
                "euler_change": (after[0] - after[1]) - (before[0] - before[1]),
            }
        return out


class RRSweep(Command):
    """The `rr-sweep` command checks Riemann-Roch on random divisors.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.
        columns (List[ColumnSpecs]): The table columns.

    Attributes:
        points (List[Point]): The support of the divisors.
        coeff_range (Tuple[int, int]): Inclusive bounds of the coefficients.
        max_degree (int): Bound on |deg D|.
        samples (int): The number of divisors drawn.
    """

    name: str = "rr-sweep"
    aliases: List[str] = ["r"]
    columns = RR_COLUMNS

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="check Riemann-Roch on randomly drawn divisors",
            cmd_cls=RRSweep,
        )
        parser.add_argument(
            "--points",
            default="0,1,-1,i,2,inf",
            help="comma-separated support (default: %(default)s)",
        )
        parser.add_argument(
            "--coeff-range",
            nargs=2,
            type=int,
            default=[-3, 3],
            metavar=("LO", "HI"),
            help="inclusive coefficient range (default: -3 3)",
        )
        parser.add_argument(
            "--max-degree", type=int, default=8, help="bound on |deg D| (default: 8)"
        )
        parser.add_argument(
            "-n", "--samples", type=int, default=500, help="divisors drawn (default: 500)"
        )

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        self._check_sweep(args.coeff_range, args.max_degree, args.samples)
        self.points = [inputformat.parse_point(p) for p in args.points.split(",")]
        if len(set(self.points)) != len(self.points):
            raise ValueError(f"Support '{args.points}' repeats a point")
        self.coeff_range = tuple(args.coeff_range)
        self.max_degree = args.max_degree
        self.samples = args.samples

        logger.debug(f"instance variables: {vars(self)}")

    @staticmethod
    def _check_sweep(coeff_range: Sequence[int], max_degree: int, samples: int) -> None:
        """Raises `ValueError` for an empty range or a negative bound."""
        if coeff_range[0] > coeff_range[1]:
            raise ValueError(f"Coefficient range {list(coeff_range)} is empty")
        if max_degree < 0 or samples < 1:
            raise ValueError("The degree bound must be >= 0 and the sample count >= 1")

    def draw(self) -> List[DivisorP1]:
        """Seeded divisors with |deg D| ≤ max_degree."""
        rng = np.random.default_rng(self.settings.seed)
        lo, hi = self.coeff_range
        out: List[DivisorP1] = []
        attempts = 0
        while len(out) < self.samples:
            attempts += 1
            if attempts > 1000 * self.samples:
                raise ValueError("The degree bound rejects almost every draw")
            coeffs = rng.integers(lo, hi + 1, size=len(self.points))
            if abs(int(coeffs.sum())) <= self.max_degree:
                out.append(DivisorP1(dict(zip(self.points, (int(c) for c in coeffs)))))
        return out

    def report(self) -> Dict[str, Any]:
        rows = []
        for divisor in self.draw():
            policy = TruncationPolicy.for_divisor(
                divisor, self.settings.window_margin, self.settings.stabilization_step
            )
            rr = riemann_roch_check(divisor, policy)
            rows.append(
                {
                    "divisor": json.dumps(encode(divisor), sort_keys=True),
                    "degree": rr.degree,
                    "window": policy.window,
                    "h0": rr.h0,
                    "h1": rr.h1,
                    "lhs": rr.lhs,
                    "rhs": rr.rhs,
                    "holds": rr.holds,
                }
            )
        df = df_drop_duplicates(to_frame(rows, self.columns), subset=["divisor"])
        failures = int((~df["holds"]).sum())
        if failures:
            logger.warning(f"Riemann-Roch fails for {failures} divisors")
        return {
            "checked": len(df),
            "failures": failures,
            "rows": df.to_dict(orient="records"),
        }


class MLP1(Command):
    """The `ml-p1` command solves a Mittag-Leffler problem on ℙ¹ through its
    Čech obstruction class.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.

    Attributes:
        parts (str): The principal parts document.
        window (Optional[int]): The truncation window M.
    """

    name: str = "ml-p1"
    aliases: List[str] = ["m"]

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="solve a Mittag-Leffler problem on the projective line",
            cmd_cls=MLP1,
        )
        parser.add_argument(
            "--parts",
            required=True,
            help='principal parts, e.g. \'[{"pole": "0", "coeffs": ["1"]}]\'',
        )
        parser.add_argument("-m", "--window", type=int, help="truncation window M")

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        self.parts = args.parts
        self.window = args.window

        logger.debug(f"instance variables: {vars(self)}")

    def report(self) -> Dict[str, Any]:
        distribution = MLDistribution.create(parse_input(self.parts, inputformat.PARTS))
        policy = None
        if self.window is not None:
            policy = TruncationPolicy(self.window, self.settings.stabilization_step)
        obstruction = ml_obstruction(distribution, policy)
        out: Dict[str, Any] = {
            "ranks": obstruction.report.ranks,
            "class_is_zero": obstruction.class_is_zero,
        }
        if obstruction.class_is_zero:
            solution = obstruction.solution()
            direct = ml_solve(distribution)
            offset = solution - direct
            out["solution"] = solution
            out["constant_offset"] = None
            if offset.is_polynomial() and offset.num.degree <= 0:
                out["constant_offset"] = offset.num.coefficient(0)
            out["reproduces_parts"] = all(
                principal_part_at(solution, part.pole) == part for part in distribution.parts
            )
        return out


class PlaneML(Command):
    """The `plane-ml` command builds a Mittag-Leffler series on a plane domain.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.
        columns (List[ColumnSpecs]): The grid columns.

    Attributes:
        domain (str): The domain document.
        poles (str): The principal parts document.
        stages (int): The number N of stages.
        grid (Optional[str]): "x0:x1:nx,y0:y1:ny", the evaluation grid.
        depth (Optional[int]): Evaluate the partial sum through this stage.
    """

    name: str = "plane-ml"
    aliases: List[str] = ["g"]
    columns = GRID_COLUMNS

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="construct a meromorphic function with prescribed poles on a domain",
            cmd_cls=PlaneML,
        )
        parser.add_argument("--domain", required=True, help='domain, e.g. \'{"kind": "plane"}\'')
        parser.add_argument("--poles", required=True, help="principal parts document")
        parser.add_argument("-N", "--stages", type=int, required=True, help="stages N")
        parser.add_argument("--grid", help="evaluation grid x0:x1:nx,y0:y1:ny")
        parser.add_argument("--depth", type=int, help="evaluate through this stage")

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        self._check_stages(args.stages, args.depth)
        if self.format == "csv" and args.grid is None:
            raise ValueError("CSV output of plane-ml needs --grid")
        self.domain = args.domain
        self.poles = args.poles
        self.stages = args.stages
        self.grid = args.grid
        self.depth = args.depth

        logger.debug(f"instance variables: {vars(self)}")

    @staticmethod
    def _check_stages(stages: int, depth: Optional[int]) -> None:
        """Raises `ValueError` unless 1 ≤ depth ≤ stages."""
        if stages < 1:
            raise ValueError(f"Stage count {stages} must be positive")
        if depth is not None and not 1 <= depth <= stages:
            raise ValueError(f"Depth {depth} is not in [1, {stages}]")

    @staticmethod
    def verification_radius(series: MLSeries, part: NumericPart) -> float:
        """A quarter of the distance to the other poles and to ℂ∖G."""
        a = part.pole
        others = [abs(p.pole - a) for p in series.parts if p.pole != a]
        limit = min(others + [float(series.domain.distance_to_complement(a)), 4.0])
        return limit / 4.0

    def report(self) -> Dict[str, Any]:
        domain = parse_input(self.domain, inputformat.DOMAIN)
        parts = parse_input(self.poles, inputformat.POLES)
        grouping = group_poles(parts, domain, self.stages)
        series = assemble(grouping, domain, self.stages, self.settings)
        verification = [
            {
                "pole": part.pole,
                "error": verify_principal_part(
                    series,
                    part,
                    self.verification_radius(series, part),
                    self.settings.contour_samples,
                ),
            }
            for part in series.parts
        ]
        out: Dict[str, Any] = {
            "domain": domain._asdict(),
            "stages": [
                {
                    "n": s.n,
                    "poles": len(s.parts),
                    "certified_bound": s.certified_bound,
                    "push_steps": [len(c.path_log) for c in s.corrections],
                }
                for s in series.stages
            ],
            "tail_bound": series.tail_bound,
            "verification": verification,
        }
        if self.grid is not None:
            points = inputformat.parse_grid(self.grid)
            values, bounds = evaluate_grid(series, points, self.depth, self.settings)
            df = pd.DataFrame(
                {
                    "z_re": points.real,
                    "z_im": points.imag,
                    "f_re": values.real,
                    "f_im": values.imag,
                    "bound": bounds,
                }
            )
            out["uncertified_points"] = df_count_na(df, subset=["f_re", "f_im", "bound"])
            out["rows"] = df.to_dict(orient="records")
        return out


class TorusML(Command):
    """The `torus-ml` command decides and solves a Mittag-Leffler problem on a
    complex torus.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.

    Attributes:
        lattice (Lattice): The lattice.
        parts (str): The principal parts document.
        check (bool): Measure periodicity, local coefficients and identities.
        force (bool): Build the (quasi-periodic) function even if unsolvable.
    """

    name: str = "torus-ml"
    aliases: List[str] = ["t"]

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="solve a Mittag-Leffler problem on a complex torus",
            cmd_cls=TorusML,
        )
        parser.add_argument("--lattice", required=True, help='periods, e.g. "1,0.3+1.2i"')
        parser.add_argument("--parts", required=True, help="principal parts document")
        parser.add_argument(
            "--check", action="store_true", help="measure the quality of the solution"
        )
        parser.add_argument(
            "--force", action="store_true", help="construct even if the residues do not cancel"
        )

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        self.lattice = inputformat.parse_lattice(args.lattice)
        self.parts = args.parts
        self.check = args.check
        self.force = args.force

        logger.debug(f"instance variables: {vars(self)}")

    def report(self) -> Dict[str, Any]:
        distribution = TorusDistribution.create(
            self.lattice, parse_input(self.parts, inputformat.TORUS_PARTS)
        )
        total, solvable = residue_test(distribution, self.settings.residue_tol)
        out: Dict[str, Any] = {
            "lattice": self.lattice._asdict(),
            "residue_sum": total,
            "solvable": solvable,
            "max_periodicity_dev": None,
        }
        if not (solvable or self.force):
            logger.info("residues do not cancel, no elliptic function exists")
            return out
        ctx = WeierstrassContext.from_settings(self.lattice, self.settings)
        f = torus_solve(distribution, ctx, force=self.force)
        out["forced"] = f.forced
        out["g2"], out["g3"] = ctx.g2, ctx.g3
        out["tail_estimate"] = ctx.tail_estimate
        if self.check:
            s = self.settings
            dev = check_periodicity(f, s.periodicity_samples, s.periodicity_tol, s.seed)
            out["max_periodicity_dev"] = dev
            out["max_coefficient_error"] = local_coefficient_error(f, s.contour_samples)
            out["legendre_error"] = legendre_error(ctx)
            w1, w2 = self.lattice
            samples = 0.3 * w1 + np.array([0.21, 0.37, 0.44]) * w2
            out["identity_error"] = weierstrass_identity_error(ctx, samples)
        return out


class Tables(Command):
    """The `tables` command prints Betti, Hodge and O(d) tables of ℙⁿ.

    Attributes: Class Attributes
        name (str): The command's CLI name.
        aliases (List[str]): The command's CLI aliases.
        columns (List[ColumnSpecs]): The table columns; for O(d) rows `p` is d.

    Attributes:
        n (int): The dimension.
        degrees (range): The d of the O(d) table.
    """

    name: str = "tables"
    aliases: List[str] = ["b"]
    columns = TABLE_COLUMNS

    @classmethod
    def configure_args(cls, subparsers: _SubParsersAction) -> None:
        parser = _add_parser(
            subparsers,
            name=cls.name,
            aliases=cls.aliases,
            help="print cohomology tables of projective space",
            cmd_cls=Tables,
        )
        parser.add_argument("-n", "--n", type=int, required=True, help="dimension n")
        parser.add_argument(
            "--d-range",
            nargs=2,
            type=int,
            default=[-4, 4],
            metavar=("LO", "HI"),
            help="degrees of the O(d) table (default: -4 4)",
        )

    def __init__(self, args: Namespace) -> None:
        super().__init__(args)

        if args.n < 1:
            raise ValueError(f"Dimension {args.n} must be at least 1")
        if args.d_range[0] > args.d_range[1]:
            raise ValueError(f"Degree range {args.d_range} is empty")
        self.n = args.n
        self.degrees = range(args.d_range[0], args.d_range[1] + 1)

        logger.debug(f"instance variables: {vars(self)}")

    def report(self) -> Dict[str, Any]:
        n = self.n
        betti = betti_numbers(n)
        hodge = hodge_diamond(n)
        rows: List[Dict[str, Any]] = [
            {"table": "betti", "n": n, "p": k, "q": 0, "value": b} for k, b in enumerate(betti)
        ]
        rows += [
            {"table": "hodge", "n": n, "p": p, "q": q, "value": hodge[p][q]}
            for p in range(n + 1)
            for q in range(n + 1)
        ]
        rows += [
            {"table": "od", "n": n, "p": d, "q": q, "value": od_table(n, d, q)}
            for d in self.degrees
            for q in range(n + 1)
        ]
        out: Dict[str, Any] = {"n": n, "betti": betti, "hodge": hodge, "rows": rows}
        if n == 1:
            out["od_cech_agrees"] = self._cross_check()
            out["omega1_ranks"] = omega1_cech().ranks
        return out

    def _cross_check(self) -> bool:
        """Compares the closed-form O(d) row with the Čech computation on ℙ¹."""
        for d in self.degrees:
            try:
                rr = riemann_roch_check(DivisorP1.point(INF, d))
            except StabilizationError:
                return False
            if (rr.h0, rr.h1) != (od_table(1, d, 0), od_table(1, d, 1)):
                logger.warning(f"O({d}): Čech gives {(rr.h0, rr.h1)}")
                return False
        return True


def get_command_classes() -> List[Type[Command]]:
    """The `Command` subclasses in definition order, which is the order of `mlc --help`.

    Returns:
        A[n] `List[Type[Command]]`.
    """
    command_module = sys.modules[__name__]
    return [getattr(command_module, c.__name__) for c in Command.__subclasses__()]


def _add_parser(
    subparsers: _SubParsersAction,
    name: str,
    aliases: List[str],
    help: str,
    cmd_cls: Type[Command],
) -> ArgumentParser:
    """Registers `cmd_cls` under `name` and `aliases` with the common report options.

    Args:
        subparsers (_SubParsersAction): The `mlc` subparsers.
        name (str): The CLI name.
        aliases (List[str]): The CLI aliases.
        help (str): One line for `mlc --help`.
        cmd_cls (Type[Command]): Instantiated with the parsed `Namespace`.

    Returns:
        A[n] `ArgumentParser` to which the command adds its own options.
    """
    parser = subparsers.add_parser(name, aliases=aliases, help=help)
    cmd_cls.configure_common_args(parser)

    # main() instantiates args.init(args)
    parser.set_defaults(init=cmd_cls)

    return parser
