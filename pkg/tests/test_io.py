import numpy as np
import pytest

from freqcip.forward import BoundaryData
from freqcip.grid import FrequencyGrid, MediumProfile, SpatialGrid
from freqcip.ingest import TimeSeries
from freqcip.io import (InputError, read_boundary_data, read_json, read_profile,
                        read_time_series, write_boundary_data, write_columns,
                        write_gnuplot, write_json, write_profile, write_time_series)


def test_profile_round_trip(tmp_path, profiles):
    path = tmp_path / "p.csv"
    write_profile(path, profiles[7.0])
    assert path.read_text().startswith("x,c\n")
    back = read_profile(path)
    assert np.array_equal(back.c, profiles[7.0].c)


def test_boundary_data_round_trip(tmp_path, data):
    path = tmp_path / "d.csv"
    write_boundary_data(path, data[4.0])
    assert path.read_text().startswith("k,re_g0,im_g0\n")
    back = read_boundary_data(path)
    assert np.array_equal(back.g0, data[4.0].g0)
    assert back.freq == data[4.0].freq


def test_time_series_round_trip_and_header(tmp_path):
    ts = TimeSeries(np.sin(np.arange(20.0)), 2.5e-10, -1e-9)
    path = tmp_path / "t.txt"
    write_time_series(path, ts)
    back = read_time_series(path)
    assert back.dt == 2.5e-10 and back.t0 == -1e-9
    assert np.array_equal(back.samples, ts.samples)
    plain = tmp_path / "plain.txt"
    plain.write_text("\n".join(["1.0"] * 10))
    assert read_time_series(plain).dt == 0.133e-9


@pytest.mark.parametrize("text", ["x,c\n0,1\n", "k,re\n1,2\n", "x,c\n0,a\n0.5,1\n1,1\n",
                                  "x,c\n0,1\n0.3,1\n0.5,1\n0.7,1\n1,1\n", ""])
def test_bad_profiles_rejected(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(InputError):
        read_profile(path)


def test_bad_boundary_data_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("k,re_g0,im_g0\n1.5,1,0\n1.4,1,0\n1.35,1,0\n")
    with pytest.raises(InputError):
        read_boundary_data(path)
    path.write_text("k,re_g0,im_g0\n1.5,0,0\n1.48,1,0\n")
    with pytest.raises(InputError):
        read_boundary_data(path)
    with pytest.raises(InputError):
        read_boundary_data(tmp_path / "missing.csv")


def test_bad_time_series_rejected(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("# dt=abc\n" + "1\n" * 10)
    with pytest.raises(InputError):
        read_time_series(path)
    path.write_text("1\n2\nthree\n")
    with pytest.raises(InputError):
        read_time_series(path)
    path.write_text("1\n2\n")
    with pytest.raises(InputError):
        read_time_series(path)


def test_json_and_plot_files(tmp_path):
    write_json(tmp_path / "a.json", {"b": 1, "a": [1, 2]})
    assert read_json(tmp_path / "a.json") == {"a": [1, 2], "b": 1}
    (tmp_path / "list.json").write_text("[1]")
    with pytest.raises(InputError):
        read_json(tmp_path / "list.json")
    write_columns(tmp_path / "c.dat", {"k": [1, 2], "y": [3, 4]})
    assert np.array_equal(np.loadtxt(tmp_path / "c.dat"), [[1, 3], [2, 4]])
    write_gnuplot(tmp_path / "c.gp", "c.dat", [(1, 2, "y")], "k", "y")
    assert "plot 'c.dat' using 1:2" in (tmp_path / "c.gp").read_text()
