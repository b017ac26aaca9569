"""Command-line client for the service handlers.

Every subcommand builds a request model, calls the matching handler from
service.py in process, and renders the response as text or JSON.

Exit codes: 1 invalid input, 2 class not slot-bounded in the requested
mode, 3 state or size cap exceeded, 4 verification mismatch.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import service
from .core import ResourceCapExceeded
from .encodings import InvalidWord
from .engine import NotSlotBounded, StateCapExceeded


def _run(handler, request_cls, **kwargs):
    """Build the request, run the handler, map errors to exit codes."""
    try:
        return handler(request_cls(**kwargs))
    except NotSlotBounded as exc:
        _fail(2, exc)
    except (ResourceCapExceeded, StateCapExceeded) as exc:
        _fail(3, exc)
    except (ValueError, InvalidWord) as exc:
        _fail(1, exc)


def _fail(code: int, exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text)
    else:
        Path(out).write_text(text + "\n")


def _terms_line(terms: list[int]) -> str:
    return ", ".join(str(t) for t in terms)


mode_option = click.option(
    "--mode",
    type=click.Choice(["vertical", "horizontal", "both"]),
    default="vertical",
    show_default=True,
    help="Insertion encoding direction; both tries vertical then horizontal.",
)
terms_option = click.option(
    "--terms", type=int, default=10, show_default=True, help="Sequence length."
)
max_states_option = click.option(
    "--max-states",
    type=int,
    default=None,
    help="State cap for exploration (default CAYENC_MAX_STATES or "
    f"{service.DEFAULT_STATE_CAP}).",
)
max_size_option = click.option(
    "--max-size",
    type=int,
    default=None,
    help="Size cap for brute-force counting (default CAYENC_MAX_SIZE or "
    f"{service.DEFAULT_SIZE_CAP}).",
)
format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
    help="Output format.",
)
out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write output to FILE instead of stdout.",
)


@click.group()
def main() -> None:
    """Classify and enumerate Cayley permutation classes by insertion encoding.

    Bases are given as space-separated patterns, one-line values up to 9
    per position ("231 312 2121").  Exit codes: 1 invalid input, 2 not
    slot-bounded, 3 cap exceeded, 4 verification mismatch.
    """


@main.command()
@click.argument("basis", nargs=-1, required=True)
@click.option(
    "--mode",
    type=click.Choice(["vertical", "horizontal", "both"]),
    default="both",
    show_default=True,
    help="Which encoding directions to test.",
)
@format_option
@out_option
def classify(basis: tuple[str, ...], mode: str, fmt: str, out: str | None) -> None:
    """Report whether the class has a regular insertion encoding."""
    resp = _run(service.handle_classify, service.ClassifyRequest, basis=list(basis), mode=mode)
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
        return
    lines = []
    for v in resp.verdicts:
        prefix = "" if len(resp.verdicts) == 1 else f"{v.mode} "
        if v.regular:
            lines.append(f"{prefix}regular: yes")
        else:
            missing = ", ".join(v.missing)
            lines.append(
                f"{prefix}regular: no (missing juxtaposition classes: {missing})"
            )
    _emit("\n".join(lines), out)


@main.command()
@click.argument("basis", nargs=-1, required=True)
@mode_option
@terms_option
@max_states_option
@format_option
@out_option
def gf(
    basis: tuple[str, ...],
    mode: str,
    terms: int,
    max_states: int | None,
    fmt: str,
    out: str | None,
) -> None:
    """Compute the class's rational generating function and series."""
    resp = _run(
        service.handle_gf,
        service.GfRequest,
        basis=list(basis),
        mode=mode,
        terms=terms,
        max_states=max_states,
    )
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
        return
    _emit(
        "\n".join(
            [
                f"mode: {resp.mode}",
                f"states: {resp.states}",
                f"gf: {resp.gf}",
                f"terms: {_terms_line(resp.terms)}",
            ]
        ),
        out,
    )


@main.command()
@click.argument("basis", nargs=-1, required=True)
@terms_option
@max_size_option
@format_option
@out_option
def count(
    basis: tuple[str, ...],
    terms: int,
    max_size: int | None,
    fmt: str,
    out: str | None,
) -> None:
    """Count the class's members of each size by brute force."""
    resp = _run(
        service.handle_count,
        service.CountRequest,
        basis=list(basis),
        terms=terms,
        max_size=max_size,
    )
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
        return
    _emit(_terms_line(resp.terms), out)


@main.command()
@click.argument("perm")
@mode_option
@format_option
@out_option
def encode(perm: str, mode: str, fmt: str, out: str | None) -> None:
    """Encode a Cayley permutation as an insertion letter word."""
    resp = _run(service.handle_encode, service.EncodeRequest, perm=perm, mode=mode)
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
        return
    if len(resp.words) == 1:
        _emit(next(iter(resp.words.values())), out)
    else:
        _emit(
            "\n".join(f"{mode}: {word}" for mode, word in resp.words.items()), out
        )


@main.command()
@click.argument("word", nargs=-1, required=True)
@click.option(
    "--mode",
    type=click.Choice(["vertical", "horizontal"]),
    default="vertical",
    show_default=True,
    help="Alphabet the word is written in.",
)
@format_option
@out_option
def decode(word: tuple[str, ...], mode: str, fmt: str, out: str | None) -> None:
    """Decode an insertion letter word back to a Cayley permutation."""
    resp = _run(
        service.handle_decode, service.DecodeRequest, word=" ".join(word), mode=mode
    )
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
        return
    _emit(resp.perm, out)


@main.command()
@format_option
@out_option
def survey(fmt: str, out: str | None) -> None:
    """Classify every non-empty basis of size-3 patterns."""
    resp = service.handle_survey()
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
        return
    lines = ["size  bases  vertical  horizontal  either"]
    for row in resp.rows:
        lines.append(
            f"{row.size:>4}  {row.bases:>5}  {row.vertical:>8}  "
            f"{row.horizontal:>10}  {row.either:>6}"
        )
    lines.append(f"total either-regular: {resp.total_either}")
    _emit("\n".join(lines), out)


@main.command()
@click.argument("basis", nargs=-1, required=True)
@click.option(
    "--mode",
    type=click.Choice(["vertical", "horizontal", "both"]),
    default="both",
    show_default=True,
    help="Insertion encoding direction; both tries vertical then horizontal.",
)
@terms_option
@max_states_option
@max_size_option
@format_option
@out_option
def verify(
    basis: tuple[str, ...],
    mode: str,
    terms: int,
    max_states: int | None,
    max_size: int | None,
    fmt: str,
    out: str | None,
) -> None:
    """Check the generating function series against brute-force counts."""
    resp = _run(
        service.handle_verify,
        service.VerifyRequest,
        basis=list(basis),
        mode=mode,
        terms=terms,
        max_states=max_states,
        max_size=max_size,
    )
    if fmt == "json":
        _emit(resp.model_dump_json(indent=2), out)
    else:
        lines = [f"mode: {resp.mode}"]
        for row in resp.rows:
            status = "ok" if row.match else "MISMATCH"
            lines.append(f"n={row.n}: gf={row.from_gf} brute={row.brute} {status}")
        lines.append(f"agree: {'yes' if resp.agree else 'no'}")
        _emit("\n".join(lines), out)
    if not resp.agree:
        sys.exit(4)


@main.command()
@click.argument("kind", type=click.Choice(["grammar", "tiling"]))
@click.argument("basis", nargs=-1, required=True)
@mode_option
@max_states_option
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json", "dot"]),
    default="text",
    show_default=True,
    help="Artifact format; dot applies to grammars only.",
)
@out_option
def export(
    kind: str,
    basis: tuple[str, ...],
    mode: str,
    max_states: int | None,
    fmt: str,
    out: str | None,
) -> None:
    """Write the class's rule system or root tiling."""
    resp = _run(
        service.handle_export,
        service.ExportRequest,
        basis=list(basis),
        kind=kind,
        mode=mode,
        format=fmt,
        max_states=max_states,
    )
    _emit(resp.content, out)


if __name__ == "__main__":
    main()
