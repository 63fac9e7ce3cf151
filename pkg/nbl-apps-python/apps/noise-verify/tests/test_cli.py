# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

import contextlib
import math
import socket
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from click.testing import CliRunner
from nbl.noise_verify.cli import main
from nbl.noise_verify.common_coin import CoinSeed, load_seed_file
from nbl.noise_verify.errors import ProtocolError
from nbl.noise_verify.protocol import VerificationServer

DOCUMENT = b"the quick brown fox jumps over the lazy dog"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ["SEED_FILE", "EPSILON", "K", "FORMAT"]:
        monkeypatch.delenv(f"NOISE_VERIFY_{name}", raising=False)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner(mix_stderr=False)


@pytest.fixture
def document(tmp_path: Path) -> Path:
    path = tmp_path / "document.bin"
    path.write_bytes(DOCUMENT)
    return path


def _closed_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@contextlib.contextmanager
def _peer(data: bytes, coin: CoinSeed, epsilon=None):
    server = VerificationServer(
        ("127.0.0.1", 0), lambda: contextlib.nullcontext(data), coin, epsilon, 5.0
    )
    with server, ThreadPoolExecutor(max_workers=1) as executor:
        yield server.address, executor.submit(server.serve_once)


def test_version(runner: CliRunner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "0.1.0"


def test_help_lists_subcommands(runner: CliRunner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for name in ["digest", "serve", "connect", "mc-error", "oracle", "scenario", "continuum"]:
        assert name in result.stdout


def test_seed_command(runner: CliRunner, tmp_path: Path):
    path = tmp_path / "new.seed"
    result = runner.invoke(main, ["seed", "--output", str(path), "--from-int", "7"])
    assert result.exit_code == 0
    assert load_seed_file(path) == CoinSeed.from_int(7)
    assert result.stdout == f"seed_id: {CoinSeed.from_int(7).seed_id_hex}\n"
    assert "predictable" in result.stderr

    result = runner.invoke(main, ["seed", "--output", str(path)])
    assert result.exit_code == 2
    assert "--force" in result.stderr

    result = runner.invoke(main, ["seed", "--output", str(path), "--force"])
    assert result.exit_code == 0
    assert load_seed_file(path) != CoinSeed.from_int(7)


def test_digest(runner: CliRunner, tmp_path: Path, seed_file: Path, seed: CoinSeed):
    empty = tmp_path / "empty.bin"
    empty.write_bytes(b"")
    args = ["digest", "--input", str(empty), "--seed-file", str(seed_file), "--k", "8"]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["digest: ff", "k: 8", f"seed_id: {seed.seed_id_hex}"]


def test_digest_reads_seed_file_from_environment(
    runner: CliRunner, document: Path, seed_file: Path
):
    direct = runner.invoke(
        main, ["digest", "--input", str(document), "--seed-file", str(seed_file), "--k", "84"]
    )
    from_env = runner.invoke(
        main,
        ["digest", "--input", str(document), "--k", "84"],
        env={"NOISE_VERIFY_SEED_FILE": str(seed_file)},
    )
    assert from_env.exit_code == direct.exit_code == 0
    assert from_env.stdout == direct.stdout


def test_digest_errors(runner: CliRunner, tmp_path: Path, document: Path, seed_file: Path):
    missing_input = runner.invoke(
        main,
        ["digest", "--input", str(tmp_path / "nope")]
        + ["--seed-file", str(seed_file), "--k", "8"],
    )
    assert missing_input.exit_code == 2
    assert "doesn't exist" in missing_input.stderr

    missing_seed = runner.invoke(main, ["digest", "--input", str(document), "--k", "8"])
    assert missing_seed.exit_code == 2
    assert "No seed file" in missing_seed.stderr

    bad_k = runner.invoke(
        main, ["digest", "--input", str(document), "--seed-file", str(seed_file), "--k", "0"]
    )
    assert bad_k.exit_code == 2


def test_connect_to_equal_peer(
    runner: CliRunner, document: Path, seed_file: Path, seed: CoinSeed
):
    with _peer(DOCUMENT, seed) as (address, served):
        result = runner.invoke(
            main,
            [
                "connect",
                "--peer",
                address,
                "--input",
                str(document),
                "--seed-file",
                str(seed_file),
                "--epsilon",
                "1e-25",
            ],
        )
        assert served.result().equal_presumed
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert "decision: equal_presumed" in lines
    assert "k: 84" in lines
    assert "headline_k: 83" in lines
    assert "bits_communicated: 84" in lines
    assert "transport_bytes: 104" in lines


def test_connect_to_different_peer(
    runner: CliRunner, document: Path, seed_file: Path, seed: CoinSeed
):
    with _peer(DOCUMENT.upper(), seed) as (address, served):
        result = runner.invoke(
            main,
            ["connect", "--peer", address, "--input", str(document)]
            + ["--seed-file", str(seed_file), "--k", "20"],
        )
        assert not served.result().equal_presumed
    assert result.exit_code == 1
    assert "decision: different" in result.stdout.splitlines()


def test_connect_with_seed_mismatch(
    runner: CliRunner, document: Path, seed_file: Path, other_seed: CoinSeed
):
    with _peer(DOCUMENT, other_seed) as (address, served):
        result = runner.invoke(
            main,
            ["connect", "--peer", address, "--input", str(document)]
            + ["--seed-file", str(seed_file), "--epsilon", "0.001"],
        )
        with pytest.raises(ProtocolError):
            served.result()
    assert result.exit_code == 4
    assert "SEED_MISMATCH" in result.stderr


def test_connect_to_closed_port(runner: CliRunner, document: Path, seed_file: Path):
    result = runner.invoke(
        main,
        ["connect", "--peer", f"127.0.0.1:{_closed_port()}", "--input", str(document)]
        + ["--seed-file", str(seed_file), "--epsilon", "0.01", "--timeout", "2"],
    )
    assert result.exit_code == 3
    assert "Could not connect" in result.stderr


def test_connect_parameter_errors(runner: CliRunner, document: Path, seed_file: Path):
    base = ["connect", "--peer", "127.0.0.1:1", "--input", str(document)]
    both = runner.invoke(
        main, base + ["--seed-file", str(seed_file), "--epsilon", "0.01", "--k", "7"]
    )
    assert both.exit_code == 2
    assert "either --epsilon or --k" in both.stderr

    neither = runner.invoke(main, base + ["--seed-file", str(seed_file)])
    assert neither.exit_code == 2

    invalid = runner.invoke(main, base + ["--seed-file", str(seed_file), "--epsilon", "2"])
    assert invalid.exit_code == 2
    assert "Input validation failed for ('epsilon',)" in invalid.stderr


def test_serve_checks_input_before_listening(runner: CliRunner, tmp_path, seed_file: Path):
    result = runner.invoke(
        main,
        ["serve", "--listen", "127.0.0.1:0", "--once", "--input", str(tmp_path / "nope")]
        + ["--seed-file", str(seed_file)],
    )
    assert result.exit_code == 2
    assert "doesn't exist" in result.stderr


def test_scenario(runner: CliRunner):
    result = runner.invoke(
        main, ["scenario", "--L", "1e12", "--rate", "1e3", "--epsilon", "1e-25"]
    )
    assert result.exit_code == 0
    assert "protocol: 0.084 s" in result.stdout
    assert "headline: 0.083 s" in result.stdout
    assert "(31.7 years)" in result.stdout


def test_scenario_csv_from_environment(runner: CliRunner):
    result = runner.invoke(
        main,
        ["scenario", "--L", "1e12", "--rate", "1e3", "--epsilon", "1e-25"],
        env={"NOISE_VERIFY_FORMAT": "csv"},
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0].startswith("L,channel_rate,epsilon,k,")


def test_scenario_rejects_invalid_epsilon(runner: CliRunner):
    result = runner.invoke(main, ["scenario", "--L", "10", "--rate", "1", "--epsilon", "0"])
    assert result.exit_code == 2


def test_oracle(runner: CliRunner):
    result = runner.invoke(main, ["oracle", "--L", "2", "--k", "2"])
    assert result.exit_code == 0
    assert "rtw 1/4, gf2 1/4" in result.stdout
    assert "result: PASS" in result.stdout


@pytest.mark.parametrize("L, k", [("4", "3"), ("9", "1"), ("1", "4")])
def test_oracle_size_limit(runner: CliRunner, L: str, k: str):
    result = runner.invoke(main, ["oracle", "--L", L, "--k", k])
    assert result.exit_code == 2
    assert "L <= 3 and k <= 3" in result.stderr


def test_mc_error(runner: CliRunner):
    result = runner.invoke(
        main, ["mc-error", "--k", "1", "--L", "1", "--trials", "4000", "--seed", "1"]
    )
    assert result.exit_code in (0, 1)
    assert "4000 trials with unequal pairs" in result.stdout


def test_mc_error_with_equal_strings(runner: CliRunner):
    result = runner.invoke(
        main,
        ["mc-error", "--k", "8", "--L", "16", "--trials", "200", "--equal", "--seed", "2"]
        + ["--format", "csv"],
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "k,L,trials,false_accepts,rate,expected,sigma,pass",
        f"8,16,200,200,1.0,0.00390625,{math.sqrt(2**-8 * (1 - 2**-8) / 200)},true",
    ]


def test_mc_error_rejects_zero_k(runner: CliRunner):
    result = runner.invoke(main, ["mc-error", "--k", "0", "--L", "1"])
    assert result.exit_code == 2


def test_orthogonality_needs_enough_samples(runner: CliRunner):
    result = runner.invoke(main, ["orthogonality", "--n", "100"])
    assert result.exit_code == 2


def test_collisions_of_identical_files(runner: CliRunner, tmp_path: Path, document: Path):
    copy = tmp_path / "copy.bin"
    copy.write_bytes(DOCUMENT)
    result = runner.invoke(
        main,
        ["collisions", "--k", "8", "--pairs", "50", "--pair", str(document), str(copy)]
        + ["--seed", "3"],
    )
    assert result.exit_code == 0
    assert "misclassified:  0" in result.stdout


def test_continuum_export(runner: CliRunner, tmp_path: Path):
    export = tmp_path / "w.csv"
    result = runner.invoke(
        main,
        ["continuum", "--L", "4", "--samples", "2000", "--seed", "1"]
        + ["--export", str(export), "--format", "csv"],
    )
    assert result.exit_code in (0, 1), result.stderr
    assert result.stdout.startswith("name,observed,expected,sigma,trials,pass\n")
    lines = export.read_text().splitlines()
    assert lines[0] == "tick,value"
    assert len(lines) == 2001


def test_continuum_with_several_differing_positions(runner: CliRunner):
    result = runner.invoke(
        main,
        ["continuum", "--L", "6", "--differing", "3", "--samples", "4000", "--seed", "2"],
    )
    assert result.exit_code in (0, 1), result.stderr
    assert result.stdout.startswith("L=6 (3 differing), 4000 samples")
    assert "unequal strings detected: yes" in result.stdout

    too_many = runner.invoke(main, ["continuum", "--L", "2", "--differing", "3"])
    assert too_many.exit_code == 2


def test_connect_maps_unexpected_errors_to_internal_exit_code(
    runner: CliRunner, document: Path, seed_file: Path, mocker
):
    mocker.patch("nbl.noise_verify.commands.connect.connect_tcp")
    run = mocker.patch(
        "nbl.noise_verify.commands.connect.run_initiator", side_effect=RuntimeError("Boom!")
    )
    result = runner.invoke(
        main,
        ["connect", "--peer", "127.0.0.1:1", "--input", str(document)]
        + ["--seed-file", str(seed_file), "--k", "12"],
    )
    assert result.exit_code == 5
    assert "An unexpected error has occurred." in result.stderr
    assert run.call_args.args[2] == pytest.approx(1.5 * 2**-12)


def test_connect_rejects_k_without_error_bound(
    runner: CliRunner, document: Path, seed_file: Path, mocker
):
    connect = mocker.patch("nbl.noise_verify.commands.connect.connect_tcp")
    result = runner.invoke(
        main,
        ["connect", "--peer", "127.0.0.1:1", "--input", str(document)]
        + ["--seed-file", str(seed_file), "--k", "1100"],
    )
    assert result.exit_code == 2
    assert "k <= 1022" in result.stderr
    connect.assert_not_called()
