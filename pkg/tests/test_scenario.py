import pytest
from hypothesis import given, strategies as st

from selfref.analyzer import ConflictKind, Mode
from selfref.errors import DuplicateStipulation, InvalidIdentifier, ParseError, UnknownSchema
from selfref.naming import Opaque, Policy, TermRef
from selfref.scenario import (
    CertificateExpectation,
    ConflictExpectation,
    InstanceSpec,
    PolicyExpectation,
    Scenario,
    VerdictExpectation,
    dump_scenario,
    load_scenario,
    parse_instance_spec,
    parse_scenario,
)
from selfref.syntax import Atomic, ConstTerm, Quote, SchemaTemplate, XSlot

d = Atomic("d")


def test_load_lagadonian(tmp_path):
    path = tmp_path / "d.scn"
    path.write_text("name d\nstipulate d -> term d\nschema lagadonian\nmode csi\ndepth 2\n")
    sc = load_scenario(path)
    assert sc.stipulations == (("d", TermRef(d)),)
    assert sc.template().id == "LAGADONIAN"
    assert (sc.mode, sc.depth, sc.names) == (Mode.CSI_ONLY, 2, ("d",))


def test_load_laputan():
    sc = parse_scenario("name l\nstipulate a -> obj venus\nstipulate b -> obj venus\nschema laputan\n")
    assert sc.stipulations == (("a", Opaque("venus")), ("b", Opaque("venus")))
    assert sc.model().referent_of("a") == sc.model().referent_of("b")


def test_duplicate_stipulation():
    with pytest.raises(DuplicateStipulation, match="line 3"):
        parse_scenario("name x\nstipulate a -> obj v\nstipulate a -> obj v\nschema laputan\n")


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("name x\nstipulate a -> term 'a\nschema laputan\n", ParseError, 2),
        ("name x\nstipulate a => obj v\nschema laputan\n", ParseError, 2),
        ("name x\nschema laputan\nmode some\n", ParseError, 3),
        ("name x\nschema laputan\nfrobnicate\n", ParseError, 3),
        ("name x\nschema laputan\nexpect CSI(a) maybe\n", ParseError, 3),
        ("name x\nschema laputan\npolicy be-nice\n", ParseError, 3),
        ("name x\nschema laputan\ndepth -1\n", ParseError, 3),
        ("name x\nstipulate 9a -> obj v\nschema laputan\n", InvalidIdentifier, 2),
    ],
)
def test_syntax_errors_carry_line_numbers(text, exc, line):
    with pytest.raises(exc, match=f"line {line}"):
        parse_scenario(text)


def test_unknown_schema():
    with pytest.raises(UnknownSchema):
        parse_scenario("name x\nschema nosuch\n")


def test_missing_required():
    with pytest.raises(ParseError):
        parse_scenario("stipulate a -> obj v\n")


def test_comments_and_expectations():
    sc = parse_scenario(
        """
        # a comment
        name demo   # trailing comment
        stipulate d -> term d
        schema lagadonian
        policy no-self-reference+injective-naming
        expect CSI(d) true as (7)
        expect Phi('d', 'd') true
        expect conflict leibniz CSI(d) CSI('d')
        expect certificate
        expect policy no-self-reference fail
        """
    )
    assert sc.name == "demo"
    assert sc.policies == (Policy.NO_SELF_REFERENCE | Policy.INJECTIVE_NAMING,)
    assert sc.expectations == (
        VerdictExpectation(InstanceSpec(d, Quote(d)), "true", "(7)"),
        VerdictExpectation(InstanceSpec(Quote(d), Quote(d)), "true"),
        ConflictExpectation(ConflictKind.LEIBNIZ, InstanceSpec(d, Quote(d)), InstanceSpec(Quote(d), Quote(Quote(d)))),
        CertificateExpectation(),
        PolicyExpectation(Policy.NO_SELF_REFERENCE, False),
    )


def test_user_defined_schema():
    sc = parse_scenario("name u\nstipulate q -> term q\ndefine SELFISH Selfish xslot\nschema selfish\n")
    assert sc.template() == SchemaTemplate("SELFISH", "Selfish", XSlot())
    sc = parse_scenario("name u\nstipulate q -> obj o\ndefine PINNED Pinned const 'q'\nschema PINNED\n")
    assert sc.template().subject == ConstTerm(Quote(Atomic("q")))


def test_instance_spec():
    assert parse_instance_spec("CSI(d)") == InstanceSpec(d, Quote(d))
    assert parse_instance_spec("Phi('d','d')") == InstanceSpec(Quote(d), Quote(d))
    assert parse_instance_spec(" Phi( b , 'a' ) ") == InstanceSpec(Atomic("b"), Quote(Atomic("a")))
    assert str(InstanceSpec(Quote(d), Quote(Quote(d)))) == "CSI('d')"
    for bad in ["CSI(d", "Psi(d, d)", "Phi(d)", "CSI('d)"]:
        with pytest.raises(ParseError):
            parse_instance_spec(bad)


# -- roundtrip ----------------------------------------------------------------

idents = st.sampled_from(["a", "b", "c", "d", "v", "w"])


@st.composite
def term_st(draw):
    t = Atomic(draw(idents))
    for _ in range(draw(st.integers(0, 3))):
        t = Quote(t)
    return t


@st.composite
def scenarios(draw):
    names = draw(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=4, unique=True))
    stips = []
    for n in names:
        if draw(st.booleans()):
            stips.append((n, TermRef(draw(term_st()))))
        else:
            stips.append((n, Opaque(draw(idents))))
    spec = st.builds(InstanceSpec, term_st(), term_st())
    label = st.sampled_from(["", "(5)", "(8+)", "first one"])
    expectation = st.one_of(
        st.builds(VerdictExpectation, spec, st.sampled_from(["true", "false", "vacuous"]), label),
        st.builds(ConflictExpectation, st.sampled_from(list(ConflictKind)), spec, spec, label),
        st.just(CertificateExpectation()),
        st.builds(PolicyExpectation, st.sampled_from(list(Policy)), st.booleans()),
    )
    universe = draw(st.one_of(st.none(), st.just(tuple(names))))
    return Scenario(
        name=draw(st.sampled_from(["s", "two words", "x-1"])),
        stipulations=tuple(stips),
        schema=draw(st.sampled_from(["LAGADONIAN", "LAPUTAN"])),
        mode=draw(st.sampled_from(list(Mode))),
        depth=draw(st.integers(0, 4)),
        universe=universe,
        policies=tuple(draw(st.lists(st.sampled_from(list(Policy)), max_size=2))),
        expectations=tuple(draw(st.lists(expectation, max_size=4))),
    )


@given(scenarios())
def test_scenario_roundtrip(sc):
    text = dump_scenario(sc)
    assert parse_scenario(text) == sc
    assert dump_scenario(parse_scenario(text)) == text
