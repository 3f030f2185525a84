import pytest

from depnet import ParseError, parse_class_headers


def refs(type_refs):
    return [r.name for r in type_refs]


def test_basic_class():
    decls = parse_class_headers(
        "package p; class Foo extends Bar { Baz f; Qux m(Quux x); }"
    )
    assert len(decls) == 1
    decl = decls[0]
    assert decl.fqn == "p.Foo"
    assert decl.package == "p"
    assert refs(decl.supertypes) == ["Bar"]
    assert refs(decl.field_types) == ["Baz"]
    assert refs(decl.param_types) == ["Quux"]
    assert refs(decl.return_types) == ["Qux"]


def test_empty_class_no_package():
    decl = parse_class_headers("class A {}")[0]
    assert decl.fqn == "A"
    assert decl.package == ""
    assert not (decl.supertypes or decl.field_types or decl.param_types
                or decl.return_types)


def test_interface_void_ignored():
    decl = parse_class_headers("package p; interface I { void m(); }")[0]
    assert decl.fqn == "p.I"
    assert decl.is_interface
    assert decl.return_types == []
    assert decl.param_types == []


def test_primitives_never_stored():
    decl = parse_class_headers(
        "class A { int x; double y; boolean flag(long t, char c); }"
    )[0]
    assert decl.field_types == []
    assert decl.param_types == []
    assert decl.return_types == []


def test_nested_class_flattened():
    decls = parse_class_headers(
        "package p; class Outer { Inner f; class Inner { int x; } }"
    )
    assert [d.fqn for d in decls] == ["p.Outer.Inner", "p.Outer"]
    outer = next(d for d in decls if d.fqn == "p.Outer")
    assert refs(outer.field_types) == ["Inner"]


def test_constructor_params_tracked_separately():
    decl = parse_class_headers("package p; class A { A(B b); C m(); }")[0]
    assert refs(decl.ctor_param_types) == ["B"]
    assert refs(decl.param_types) == []
    assert refs(decl.return_types) == ["C"]


def test_generics_recorded_as_arguments():
    decl = parse_class_headers("class A { Map<Foo, Bar<Baz>> f; }")[0]
    ref = decl.field_types[0]
    assert ref.name == "Map"
    assert ref.flatten(include_args=False) == ["Map"]
    assert ref.flatten(include_args=True) == ["Map", "Foo", "Bar", "Baz"]


def test_type_parameters_collected():
    decl = parse_class_headers(
        "class Box<T> { T value; <U> U pick(U a, T b); }"
    )[0]
    assert decl.type_params == {"T", "U"}


def test_arrays_decay():
    decl = parse_class_headers("class A { Baz[] items; Baz[][] grid; }")[0]
    assert refs(decl.field_types) == ["Baz", "Baz"]


def test_modifiers_annotations_comments_skipped():
    decl = parse_class_headers(
        """
        package p;
        // leading comment
        @Deprecated
        public final class A {
            /* block comment */
            private static Baz f;
            public synchronized Qux m() throws SomeError;
        }
        """
    )[0]
    assert refs(decl.field_types) == ["Baz"]
    assert refs(decl.return_types) == ["Qux"]


def test_method_body_ignored():
    decl = parse_class_headers(
        "class A { Baz m(Qux q) { if (x) { y(); } return null; } }"
    )[0]
    assert refs(decl.return_types) == ["Baz"]
    assert refs(decl.param_types) == ["Qux"]


def test_field_initializer_ignored():
    decl = parse_class_headers("class A { Baz f = make(1, 2); int n = 3; }")[0]
    assert refs(decl.field_types) == ["Baz"]


def test_multi_name_field():
    decl = parse_class_headers("class A { Baz a, b; }")[0]
    assert refs(decl.field_types) == ["Baz", "Baz"]


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_class_headers("package p;\nclass A {\n  Baz ; \n}")
    assert err.value.line == 3


def test_lexical_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_class_headers("class A { Baz f; % }")
    assert err.value.line == 1
    assert err.value.column > 1


def test_duplicate_fqn_rejected():
    with pytest.raises(ParseError, match="duplicate"):
        parse_class_headers("package p; class A {} class A {}")


def test_missing_type_decl_rejected():
    with pytest.raises(ParseError):
        parse_class_headers("package p;")


def test_imports_stored():
    decl = parse_class_headers(
        "package p; import a.b.C; import d.E; class A {}"
    )[0]
    assert decl.imports == ["a.b.C", "d.E"]
