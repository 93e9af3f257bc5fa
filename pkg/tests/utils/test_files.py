from memrc.utils.files import atomic_write_text, csv_text


def test_atomic_write_creates_parents_and_replaces(tmp_path):
    path = tmp_path / "a" / "b.txt"
    atomic_write_text(path, "first")
    atomic_write_text(path, "second")
    assert path.read_text() == "second"
    assert [p.name for p in path.parent.iterdir()] == ["b.txt"]


def test_csv_text_puts_comments_before_the_header():
    text = csv_text(("x", "y"), [(1, "a,b")], comments=["seed=0"])
    assert text == '# seed=0\nx,y\n1,"a,b"\n'
