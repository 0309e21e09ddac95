import json
import math

import pytest

import fid3


def test_partition_memberships():
    p = fid3.build_uniform_partition(0.0, 10.0, 3, "x")
    assert len(p) == 3
    assert p.peaks() == [0.0, 5.0, 10.0]
    mu = p.memberships(3.7)
    assert mu[0] == pytest.approx(0.26)
    assert mu[1] == pytest.approx(0.74)
    assert mu[2] == 0.0
    assert p[1](5.0) == 1.0


def test_bad_partition_raises():
    with pytest.raises(fid3.DataError):
        fid3.build_uniform_partition(4.0, 4.0, 3)
    with pytest.raises(fid3.ConfigError):
        fid3.build_uniform_partition(0.0, 1.0, 9)


def test_tnorms_and_entropy():
    assert fid3.tnorm_apply(fid3.TNorm.Minimum, 0.3, 0.7) == 0.3
    assert fid3.tnorm_apply(fid3.TNorm.Product, 0.5, 0.5) == 0.25
    assert fid3.fuzzy_entropy([0.5, 0.5]) == 1.0
    assert fid3.fuzzy_entropy([1.0, 0.0]) == 0.0
    p = fid3.class_proportions([(1.0, [0.6, 0.4]), (0.5, [0.0, 1.0])], fid3.TNorm.Product)
    assert p == pytest.approx([0.6 / 1.5, 0.9 / 1.5])


def test_metrics():
    assert fid3.mre(100, 75) == 0.25
    actual = [100, 200, 50, 80, 120]
    est = [90, 260, 50, 100, 60]
    assert fid3.mmre(actual, est) == pytest.approx(23.0)
    assert fid3.pred(actual, est) == 60.0
    assert fid3.mmre_improvement(28, 0.56) == pytest.approx(98.0)


def test_holdout_split():
    train, test = fid3.holdout_split(10, 0.7, 3)
    assert len(train) == 7 and len(test) == 3
    assert sorted(train + test) == list(range(10))
    assert fid3.holdout_split(10, 0.7, 3) == (train, test)


def test_train_predict_roundtrip(tmp_path):
    data = fid3.generate_synthetic("tukutuku", 40, seed=2)
    assert len(data) == 40
    tree = fid3.train(data, tnorm=fid3.TNorm.Minimum, beta=0.2)
    assert tree.leaf_count >= 1
    efforts = data.efforts
    for row in data.rows:
        y = tree.predict(row)
        assert min(efforts) <= y <= max(efforts)

    back = fid3.FuzzyTree.from_json(tree.to_json())
    assert back.to_json() == tree.to_json()
    path = tmp_path / "m.json"
    tree.save(str(path))
    loaded = fid3.FuzzyTree.load(str(path))
    assert loaded.predict(data.rows[0]) == tree.predict(data.rows[0])
    assert json.loads(path.read_text())["tnorm"] == "minimum"


def test_product_firing_sums_to_one():
    data = fid3.generate_synthetic("cocomo81", 30, seed=4)
    tree = fid3.train(data)
    for row in data.rows[:10]:
        fired = tree.fire(row)
        assert math.isclose(sum(f.strength for f in fired), 1.0, abs_tol=1e-9)


def test_custom_dataset_crisp_tree():
    data = fid3.Dataset([[0.0], [1.0]], [10.0, 20.0], ["x"])
    tree = fid3.train(data, classes=2, sets=2, crisp=True)
    assert tree.crisp
    assert tree.predict([0.0]) == 10.0
    assert tree.predict([1.0]) == 20.0
    with pytest.raises(fid3.DataError):
        tree.predict([])


def test_sweep_and_compare_tables():
    data = fid3.generate_synthetic()
    sweep = fid3.run_sweep(data).splitlines()
    assert sweep[0].startswith("beta,model1_product_mmre")
    assert len(sweep) == 10
    cmp = fid3.compare_models(data, betas=[0.1, 0.5]).splitlines()
    assert cmp[0] == "criterion,Crisp ID3,Model 1 (product),Model 2 (minimum)"


def test_cli_entry_point(tmp_path):
    out = tmp_path / "d.csv"
    code, _, err = fid3.run_cli(["--out", str(out), "generate", "-n", "12"])
    assert code == 0, err
    assert len(out.read_text().splitlines()) == 13
    code, _, err = fid3.run_cli(["--beta", "1.2", "sweep", "--data", str(out)])
    assert code == 1
    assert err.startswith("error[config]")
