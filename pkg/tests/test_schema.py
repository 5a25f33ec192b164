import pytest

from boat.errors import DuplicateFieldError, HeaderMismatchError, MissingRoleError, SchemaSyntaxError
from boat.ingest import ROLES, default_schema, default_schema_text, load_schema, load_schema_file


def test_default_schema_binds_all_roles():
    schema = default_schema()
    assert set(schema.roles) == set(ROLES) and len(ROLES) == 7
    assert schema.by_role("cost").name == "Total Costs"
    assert schema.by_role("cost").semantic_type == "money"
    assert schema.by_role("year").semantic_type == "year"


def test_missing_cost_role():
    text = default_schema_text().replace("role = cost\n", "")
    with pytest.raises(MissingRoleError) as err:
        load_schema(text)
    assert err.value.role == "cost"


def test_duplicate_field():
    text = default_schema_text() + "\n[Total Costs]\ntype = money\n"
    with pytest.raises(DuplicateFieldError):
        load_schema(text)


def test_alias_colliding_with_name_is_duplicate():
    text = default_schema_text().replace("aliases = CCSR Diagnosis Description", "aliases = Total Costs")
    with pytest.raises(DuplicateFieldError):
        load_schema(text)


@pytest.mark.parametrize("doc, line", [
    ("type = money\n[Total Costs]\n", 1),
    ("[A]\ntype = text\nrole = year\nnullable = maybe\n", 4),
    ("[A]\ntype = float\n", 2),
    ("[A]\ntype = text\ncolour = red\n", 3),
    ("[A]\ntype = text\n[B]\ntype = text\nrole = wizard\n", 5),
])
def test_syntax_errors_carry_line(doc, line):
    with pytest.raises(SchemaSyntaxError) as err:
        load_schema(doc, required_roles=())
    assert err.value.line == line


def test_role_bound_twice():
    doc = "[A]\ntype = year\nrole = year\n[B]\ntype = year\nrole = year\n"
    with pytest.raises(SchemaSyntaxError):
        load_schema(doc, required_roles=("year",))


def test_header_matching_is_exact_and_uses_aliases():
    schema = default_schema()
    header = ["Discharge Year", "Hospital County", "Facility Name", "Age Group",
              "CCSR Diagnosis Description", "CCS Procedure Description", "Total Costs", "Extra"]
    found = schema.match_header(header)
    assert found["CCS Diagnosis Description"] == 4
    with pytest.raises(HeaderMismatchError) as err:
        schema.match_header([h.lower() for h in header])
    assert "Total Costs" in err.value.missing


def test_env_override(tmp_path, monkeypatch):
    path = tmp_path / "s.ini"
    path.write_text(default_schema_text().replace("[Total Costs]", "[Total Charges]"))
    monkeypatch.setenv("BOAT_SCHEMA", str(path))
    assert load_schema_file().by_role("cost").name == "Total Charges"
    monkeypatch.delenv("BOAT_SCHEMA")
    assert load_schema_file().by_role("cost").name == "Total Costs"
