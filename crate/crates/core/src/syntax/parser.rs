//! Recursive-descent parser for the model format.
//!
//! Parsing is fail-fast on syntax errors; name resolution and static
//! validation run afterwards and may report several diagnostics at once.

use super::lexer::{Lexer, Token, TokenKind};
use super::{Diagnostic, SourceFile};
use crate::model::{
    validate, ArithOp, Assign, CarrierDecl, CmpOp, EventDef, EventSpec, EventSys, Expr, Model,
    Program, RgQuad, RgSpecDecl, Ty, VarDecl,
};
use crate::model::validate::Site;
use std::collections::BTreeMap;

const RESERVED: &[&str] = &[
    "MODEL", "CARRIER", "CORES", "VAR", "INIT", "EVENT", "WHERE", "THEN", "ELSE", "END", "ESYS",
    "POLICY", "DOMAINS", "INTERF", "DOMEVT", "OBS", "VPEQ", "RGSPEC", "FOR", "SYS", "PRE", "RELY",
    "GUAR", "POST", "SKIP", "IF", "WHILE", "INV", "DO", "AWAIT", "NONDT", "bool", "int", "map",
    "true", "false", "forall", "exists",
];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

struct RawEsys {
    core: String,
    sys: EsysAst,
    line: usize,
    column: usize,
}

enum EsysAst {
    Seq(String, Option<Expr>, Box<EsysAst>),
    Set(Vec<String>),
}

struct Parser<'a> {
    src: &'a SourceFile,
    tokens: Vec<Token>,
    pos: usize,
    site_pos: BTreeMap<Site, (usize, usize)>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error_at(self.src, t.line, t.column, msg.into())
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                kind.describe(),
                self.peek().kind.describe()
            )))
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Token> {
        if self.at_kw(kw) {
            Ok(self.next())
        } else {
            Err(self.error_here(format!(
                "expected '{kw}', found {}",
                self.peek().kind.describe()
            )))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            other => Err(self.error_here(format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn decl_ident(&mut self) -> PResult<String> {
        let t = self.peek().clone();
        let s = self.ident()?;
        if is_reserved(&s) {
            return Err(Diagnostic::error_at(
                self.src,
                t.line,
                t.column,
                format!("'{s}' is a reserved word"),
            ));
        }
        Ok(s)
    }

    // ---- types ----

    fn parse_ty(&mut self) -> PResult<Ty> {
        if self.eat_kw("bool") {
            return Ok(Ty::Bool);
        }
        if self.eat_kw("int") {
            let lo = self.parse_signed_int()?;
            self.expect(TokenKind::DotDot)?;
            let hi = self.parse_signed_int()?;
            return Ok(Ty::Int { lo, hi });
        }
        if self.eat_kw("map") {
            let key = self.ident()?;
            self.expect(TokenKind::Arrow)?;
            let val = self.parse_ty()?;
            return Ok(Ty::Map {
                key,
                val: Box::new(val),
            });
        }
        let name = self.ident()?;
        Ok(Ty::Sym(name))
    }

    fn parse_signed_int(&mut self) -> PResult<i64> {
        let neg = if self.peek().kind == TokenKind::Minus {
            self.next();
            true
        } else {
            false
        };
        match self.peek().kind.clone() {
            TokenKind::Int(v) => {
                self.next();
                Ok(if neg { -v } else { v })
            }
            other => Err(self.error_here(format!("expected integer, found {}", other.describe()))),
        }
    }

    // ---- expressions ----

    fn parse_expr(&mut self) -> PResult<Expr> {
        self.parse_implies()
    }

    fn parse_implies(&mut self) -> PResult<Expr> {
        let lhs = self.parse_or()?;
        if self.peek().kind == TokenKind::Arrow {
            self.next();
            let rhs = self.parse_implies()?;
            Ok(Expr::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> PResult<Expr> {
        let mut e = self.parse_and()?;
        while self.peek().kind == TokenKind::OrOr {
            self.next();
            let rhs = self.parse_and()?;
            e = Expr::or(e, rhs);
        }
        Ok(e)
    }

    fn parse_and(&mut self) -> PResult<Expr> {
        let mut e = self.parse_cmp()?;
        while self.peek().kind == TokenKind::AndAnd {
            self.next();
            let rhs = self.parse_cmp()?;
            e = Expr::and(e, rhs);
        }
        Ok(e)
    }

    fn parse_cmp(&mut self) -> PResult<Expr> {
        let lhs = self.parse_sum()?;
        let op = match self.peek().kind {
            TokenKind::Eq => Some(CmpOp::Eq),
            TokenKind::Ne => Some(CmpOp::Ne),
            TokenKind::Lt => Some(CmpOp::Lt),
            TokenKind::Le => Some(CmpOp::Le),
            TokenKind::Gt => Some(CmpOp::Gt),
            TokenKind::Ge => Some(CmpOp::Ge),
            _ => None,
        };
        match op {
            Some(op) => {
                self.next();
                let rhs = self.parse_sum()?;
                Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)))
            }
            None => Ok(lhs),
        }
    }

    fn parse_sum(&mut self) -> PResult<Expr> {
        let mut e = self.parse_term()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => ArithOp::Add,
                TokenKind::Minus => ArithOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.parse_term()?;
            e = Expr::Arith(op, Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn parse_term(&mut self) -> PResult<Expr> {
        let mut e = self.parse_unary()?;
        while self.peek().kind == TokenKind::Star {
            self.next();
            let rhs = self.parse_unary()?;
            e = Expr::Arith(ArithOp::Mul, Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        if self.peek().kind == TokenKind::Not {
            self.next();
            let e = self.parse_unary()?;
            return Ok(Expr::not(e));
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> PResult<Expr> {
        let mut e = self.parse_atom()?;
        while self.peek().kind == TokenKind::LBracket {
            self.next();
            let k = self.parse_expr()?;
            if self.peek().kind == TokenKind::Assign {
                self.next();
                let v = self.parse_expr()?;
                self.expect(TokenKind::RBracket)?;
                e = Expr::set(e, k, v);
            } else {
                self.expect(TokenKind::RBracket)?;
                e = Expr::get(e, k);
            }
        }
        Ok(e)
    }

    fn parse_atom(&mut self) -> PResult<Expr> {
        match self.peek().kind.clone() {
            TokenKind::Int(v) => {
                self.next();
                Ok(Expr::lit_int(v))
            }
            TokenKind::Minus => {
                self.next();
                match self.peek().kind.clone() {
                    TokenKind::Int(v) => {
                        self.next();
                        Ok(Expr::lit_int(-v))
                    }
                    other => Err(self.error_here(format!(
                        "expected integer after unary minus, found {}",
                        other.describe()
                    ))),
                }
            }
            TokenKind::LParen => {
                self.next();
                let e = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::LBrace => {
                self.next();
                let mut entries = Vec::new();
                loop {
                    let k = self.ident()?;
                    self.expect(TokenKind::Colon)?;
                    let v = self.parse_expr()?;
                    entries.push((k, v));
                    if self.peek().kind == TokenKind::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
                Ok(Expr::MapLit(entries))
            }
            TokenKind::PrimedIdent(name) => {
                self.next();
                Ok(Expr::Prime(name))
            }
            TokenKind::Ident(name) => match name.as_str() {
                "true" => {
                    self.next();
                    Ok(Expr::lit_bool(true))
                }
                "false" => {
                    self.next();
                    Ok(Expr::lit_bool(false))
                }
                "forall" | "exists" => {
                    let is_forall = name == "forall";
                    self.next();
                    let var = self.decl_ident()?;
                    self.expect(TokenKind::Colon)?;
                    let carrier = self.ident()?;
                    self.expect(TokenKind::Dot)?;
                    let body = self.parse_expr()?;
                    Ok(if is_forall {
                        Expr::Forall(var, carrier, Box::new(body))
                    } else {
                        Expr::Exists(var, carrier, Box::new(body))
                    })
                }
                "IF" => {
                    self.next();
                    let c = self.parse_expr()?;
                    self.expect_kw("THEN")?;
                    let t = self.parse_expr()?;
                    self.expect_kw("ELSE")?;
                    let f = self.parse_expr()?;
                    self.expect_kw("END")?;
                    Ok(Expr::ite(c, t, f))
                }
                _ if is_reserved(&name) => {
                    Err(self.error_here(format!("unexpected keyword '{name}' in expression")))
                }
                _ => {
                    self.next();
                    Ok(Expr::var(name))
                }
            },
            other => Err(self.error_here(format!("unexpected {} in expression", other.describe()))),
        }
    }

    // ---- programs ----

    fn parse_program(&mut self) -> PResult<Program> {
        let first = self.parse_stmt()?;
        let mut parts: Vec<(Program, Option<Expr>)> = vec![(first, None)];
        while self.peek().kind == TokenKind::SemiSemi {
            self.next();
            let mid = if self.peek().kind == TokenKind::LBracket {
                self.next();
                let m = self.parse_expr()?;
                self.expect(TokenKind::RBracket)?;
                Some(m)
            } else {
                None
            };
            parts.last_mut().unwrap().1 = mid;
            let stmt = self.parse_stmt()?;
            parts.push((stmt, None));
        }
        // Fold right-associatively; the annotation recorded after part i is
        // the mid-condition of the Seq node joining part i to the rest.
        let (last, _) = parts.pop().unwrap();
        let mut acc = last;
        while let Some((p, mid)) = parts.pop() {
            acc = Program::Seq(Box::new(p), Box::new(acc), mid);
        }
        Ok(acc)
    }

    fn parse_stmt(&mut self) -> PResult<Program> {
        if self.peek().kind == TokenKind::LParen {
            self.next();
            let p = self.parse_program()?;
            self.expect(TokenKind::RParen)?;
            return Ok(p);
        }
        if self.eat_kw("SKIP") {
            return Ok(Program::skip());
        }
        if self.at_kw("IF") {
            self.next();
            let b = self.parse_expr()?;
            self.expect_kw("THEN")?;
            let p1 = self.parse_program()?;
            let p2 = if self.eat_kw("ELSE") {
                self.parse_program()?
            } else {
                Program::skip()
            };
            self.expect_kw("END")?;
            return Ok(Program::Cond(b, Box::new(p1), Box::new(p2)));
        }
        if self.at_kw("WHILE") {
            self.next();
            let b = self.parse_expr()?;
            let inv = if self.eat_kw("INV") {
                self.expect(TokenKind::LBracket)?;
                let i = self.parse_expr()?;
                self.expect(TokenKind::RBracket)?;
                Some(i)
            } else {
                None
            };
            self.expect_kw("DO")?;
            let body = self.parse_program()?;
            self.expect_kw("END")?;
            return Ok(Program::While(b, Box::new(body), inv));
        }
        if self.at_kw("AWAIT") {
            self.next();
            let b = self.parse_expr()?;
            self.expect_kw("THEN")?;
            let body = self.parse_program()?;
            self.expect_kw("END")?;
            return Ok(Program::Await(b, Box::new(body)));
        }
        if self.at_kw("NONDT") {
            self.next();
            self.expect(TokenKind::LBracket)?;
            let r = self.parse_expr()?;
            self.expect(TokenKind::RBracket)?;
            return Ok(Program::Nondt(r));
        }
        // Parallel assignment.
        let mut assigns = Vec::new();
        loop {
            let var = self.ident()?;
            let key = if self.peek().kind == TokenKind::LBracket {
                self.next();
                let k = self.parse_expr()?;
                self.expect(TokenKind::RBracket)?;
                Some(k)
            } else {
                None
            };
            self.expect(TokenKind::Assign)?;
            let rhs = self.parse_expr()?;
            assigns.push(Assign { var, key, rhs });
            if self.peek().kind == TokenKind::Comma {
                self.next();
            } else {
                break;
            }
        }
        Ok(Program::Basic(assigns))
    }

    // ---- declarations ----

    fn parse_sym_set(&mut self) -> PResult<Vec<String>> {
        self.expect(TokenKind::LBrace)?;
        let mut out = vec![self.decl_ident()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            out.push(self.decl_ident()?);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(out)
    }

    fn parse_esys_ast(&mut self) -> PResult<EsysAst> {
        if self.peek().kind == TokenKind::LBrace {
            self.next();
            let mut members = vec![self.ident()?];
            while self.peek().kind == TokenKind::Pipe {
                self.next();
                members.push(self.ident()?);
            }
            self.expect(TokenKind::RBrace)?;
            return Ok(EsysAst::Set(members));
        }
        let head = self.ident()?;
        self.expect(TokenKind::Semi)?;
        let mid = if self.peek().kind == TokenKind::LBracket {
            self.next();
            let m = self.parse_expr()?;
            self.expect(TokenKind::RBracket)?;
            Some(m)
        } else {
            None
        };
        let rest = self.parse_esys_ast()?;
        Ok(EsysAst::Seq(head, mid, Box::new(rest)))
    }

    fn parse_rg_quad(&mut self) -> PResult<RgQuad> {
        self.expect(TokenKind::LBrace)?;
        self.expect_kw("PRE")?;
        self.expect(TokenKind::Colon)?;
        let pre = self.parse_expr()?;
        self.expect_kw("RELY")?;
        self.expect(TokenKind::Colon)?;
        let rely = self.parse_expr()?;
        self.expect_kw("GUAR")?;
        self.expect(TokenKind::Colon)?;
        let guar = self.parse_expr()?;
        self.expect_kw("POST")?;
        self.expect(TokenKind::Colon)?;
        let post = self.parse_expr()?;
        self.expect(TokenKind::RBrace)?;
        Ok(RgQuad {
            pre,
            rely,
            guar,
            post,
        })
    }

    fn mark(&mut self, site: Site) {
        let t = self.peek().clone();
        self.site_pos.insert(site, (t.line, t.column));
    }

    fn parse_file(&mut self) -> PResult<(Model, Vec<RawEsys>)> {
        self.expect_kw("MODEL")?;
        let name = self.decl_ident()?;

        let mut carriers = Vec::new();
        let mut cores = Vec::new();
        let mut vars = Vec::new();
        let mut init = Vec::new();
        let mut events: Vec<EventDef> = Vec::new();
        let mut esys = Vec::new();
        let mut policy = None;
        let mut rgspec = RgSpecDecl::default();

        loop {
            let tok = self.peek().clone();
            match &tok.kind {
                TokenKind::Eof => break,
                TokenKind::Ident(kw) => match kw.as_str() {
                    "CARRIER" => {
                        self.next();
                        self.mark(Site::Model);
                        let cname = self.decl_ident()?;
                        self.site_pos
                            .insert(Site::Carrier(cname.clone()), (tok.line, tok.column));
                        self.expect(TokenKind::Eq)?;
                        let members = self.parse_sym_set()?;
                        carriers.push(CarrierDecl {
                            name: cname,
                            members,
                        });
                    }
                    "CORES" => {
                        self.next();
                        self.expect(TokenKind::Eq)?;
                        self.site_pos.insert(Site::Model, (tok.line, tok.column));
                        cores = self.parse_sym_set()?;
                    }
                    "VAR" => {
                        self.next();
                        let vname = self.decl_ident()?;
                        self.site_pos
                            .insert(Site::Var(vname.clone()), (tok.line, tok.column));
                        self.expect(TokenKind::Colon)?;
                        let ty = self.parse_ty()?;
                        vars.push(VarDecl { name: vname, ty });
                    }
                    "INIT" => {
                        self.next();
                        loop {
                            let t2 = self.peek().clone();
                            let vname = self.ident()?;
                            self.site_pos
                                .insert(Site::Init(vname.clone()), (t2.line, t2.column));
                            self.expect(TokenKind::Assign)?;
                            let e = self.parse_expr()?;
                            init.push((vname, e));
                            if self.peek().kind == TokenKind::Comma {
                                self.next();
                            } else {
                                break;
                            }
                        }
                    }
                    "EVENT" => {
                        self.next();
                        let ename = self.decl_ident()?;
                        self.site_pos
                            .insert(Site::Event(ename.clone()), (tok.line, tok.column));
                        let mut params = Vec::new();
                        if self.peek().kind == TokenKind::LParen {
                            self.next();
                            loop {
                                let p = self.decl_ident()?;
                                self.expect(TokenKind::Colon)?;
                                let ty = self.parse_ty()?;
                                params.push((p, ty));
                                if self.peek().kind == TokenKind::Comma {
                                    self.next();
                                } else {
                                    break;
                                }
                            }
                            self.expect(TokenKind::RParen)?;
                        }
                        let kvar = if self.peek().kind == TokenKind::At {
                            self.next();
                            Some(self.decl_ident()?)
                        } else {
                            None
                        };
                        self.expect_kw("WHERE")?;
                        let guard = self.parse_expr()?;
                        self.expect_kw("THEN")?;
                        let body = self.parse_program()?;
                        self.expect_kw("END")?;
                        events.push(EventDef {
                            name: ename,
                            params,
                            kvar,
                            guard,
                            body,
                        });
                    }
                    "ESYS" => {
                        self.next();
                        let core = self.ident()?;
                        self.site_pos
                            .insert(Site::System(core.clone()), (tok.line, tok.column));
                        self.expect(TokenKind::Eq)?;
                        let sys = self.parse_esys_ast()?;
                        esys.push(RawEsys {
                            core,
                            sys,
                            line: tok.line,
                            column: tok.column,
                        });
                    }
                    "POLICY" => {
                        self.next();
                        self.site_pos.insert(Site::Policy, (tok.line, tok.column));
                        let mut domains = Vec::new();
                        let mut interf = Vec::new();
                        let mut dom_evt = None;
                        let mut obs = BTreeMap::new();
                        let mut vpeq = BTreeMap::new();
                        loop {
                            if self.eat_kw("DOMAINS") {
                                self.expect(TokenKind::Eq)?;
                                domains = self.parse_sym_set_existing()?;
                            } else if self.eat_kw("INTERF") {
                                self.expect(TokenKind::Eq)?;
                                self.expect(TokenKind::LBrace)?;
                                if self.peek().kind != TokenKind::RBrace {
                                    loop {
                                        let a = self.ident()?;
                                        self.expect(TokenKind::Leads)?;
                                        let b = self.ident()?;
                                        interf.push((a, b));
                                        if self.peek().kind == TokenKind::Comma {
                                            self.next();
                                        } else {
                                            break;
                                        }
                                    }
                                }
                                self.expect(TokenKind::RBrace)?;
                            } else if self.eat_kw("DOMEVT") {
                                self.expect(TokenKind::LParen)?;
                                let kv = self.decl_ident()?;
                                self.expect(TokenKind::Comma)?;
                                let ev = self.decl_ident()?;
                                self.expect(TokenKind::RParen)?;
                                self.expect(TokenKind::Eq)?;
                                let e = self.parse_expr()?;
                                dom_evt = Some((kv, ev, e));
                            } else if self.eat_kw("OBS") {
                                let d = self.ident()?;
                                self.expect(TokenKind::Eq)?;
                                let e = self.parse_expr()?;
                                obs.insert(d, e);
                            } else if self.eat_kw("VPEQ") {
                                let d = self.ident()?;
                                self.expect(TokenKind::Eq)?;
                                let e = self.parse_expr()?;
                                vpeq.insert(d, e);
                            } else {
                                break;
                            }
                        }
                        let dom_evt = dom_evt.ok_or_else(|| {
                            Diagnostic::error_at(
                                self.src,
                                tok.line,
                                tok.column,
                                "policy block is missing DOMEVT".into(),
                            )
                        })?;
                        policy = Some(crate::model::PolicyDecl {
                            domains,
                            interf,
                            dom_evt,
                            obs,
                            vpeq,
                        });
                    }
                    "RGSPEC" => {
                        self.next();
                        while self.at_kw("FOR") {
                            let t2 = self.peek().clone();
                            self.next();
                            if self.eat_kw("SYS") {
                                let core = self.ident()?;
                                self.site_pos
                                    .insert(Site::RgSystem(core.clone()), (t2.line, t2.column));
                                let quad = self.parse_rg_quad()?;
                                rgspec.systems.insert(core, quad);
                            } else {
                                let ev = self.ident()?;
                                self.site_pos
                                    .insert(Site::RgEvent(ev.clone()), (t2.line, t2.column));
                                let quad = self.parse_rg_quad()?;
                                rgspec.events.insert(ev, quad);
                            }
                        }
                    }
                    other => {
                        return Err(self.error_here(format!("unexpected '{other}' at top level")));
                    }
                },
                other => {
                    return Err(self.error_here(format!(
                        "unexpected {} at top level",
                        other.describe()
                    )));
                }
            }
        }

        let model = Model {
            name,
            carriers,
            cores,
            vars,
            init,
            events,
            systems: Vec::new(),
            policy,
            rgspec,
        };
        Ok((model, esys))
    }

    /// Like `parse_sym_set`, but allows symbols declared elsewhere (policy
    /// domains may repeat carrier members).
    fn parse_sym_set_existing(&mut self) -> PResult<Vec<String>> {
        self.expect(TokenKind::LBrace)?;
        let mut out = vec![self.ident()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            out.push(self.ident()?);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(out)
    }
}

fn resolve_esys(
    src: &SourceFile,
    model: &Model,
    raw: &RawEsys,
    ast: &EsysAst,
    diags: &mut Vec<Diagnostic>,
) -> EventSys {
    match ast {
        EsysAst::Set(names) => {
            let mut idxs = Vec::new();
            for n in names {
                match model.event_index(n) {
                    Some(i) => idxs.push(i as u32),
                    None => diags.push(Diagnostic::error_at(
                        src,
                        raw.line,
                        raw.column,
                        format!("event system on {} references undeclared event '{n}'", raw.core),
                    )),
                }
            }
            EventSys::Set(idxs)
        }
        EsysAst::Seq(head, mid, rest) => {
            let idx = match model.event_index(head) {
                Some(i) => i as u32,
                None => {
                    diags.push(Diagnostic::error_at(
                        src,
                        raw.line,
                        raw.column,
                        format!("event system on {} references undeclared event '{head}'", raw.core),
                    ));
                    0
                }
            };
            EventSys::Seq(
                EventSpec::Basic(idx),
                mid.clone(),
                Box::new(resolve_esys(src, model, raw, rest, diags)),
            )
        }
    }
}

/// Parse a source file into a validated model, or report diagnostics.
pub fn parse_model(src: &SourceFile) -> Result<Model, Vec<Diagnostic>> {
    let tokens = Lexer::tokenize(src).map_err(|d| vec![d])?;
    let mut parser = Parser {
        src,
        tokens,
        pos: 0,
        site_pos: BTreeMap::new(),
    };
    let (mut model, raw_esys) = parser.parse_file().map_err(|d| vec![d])?;

    let mut diags = Vec::new();

    // Wire the per-core systems in core order.
    let mut systems: Vec<Option<EventSys>> = vec![None; model.cores.len()];
    for raw in &raw_esys {
        match model.core_index(&raw.core) {
            None => diags.push(Diagnostic::error_at(
                src,
                raw.line,
                raw.column,
                format!("event system for undeclared core '{}'", raw.core),
            )),
            Some(ci) => {
                if systems[ci].is_some() {
                    diags.push(Diagnostic::error_at(
                        src,
                        raw.line,
                        raw.column,
                        format!("core '{}' has more than one event system", raw.core),
                    ));
                }
                let sys = resolve_esys(src, &model, raw, &raw.sys, &mut diags);
                systems[ci] = Some(sys);
            }
        }
    }
    for (i, s) in systems.iter().enumerate() {
        if s.is_none() {
            diags.push(Diagnostic::error_at(
                src,
                1,
                1,
                format!("core '{}' has no event system", model.cores[i]),
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    model.systems = systems.into_iter().map(|s| s.unwrap()).collect();

    match validate(&model) {
        Ok(()) => Ok(model),
        Err(errors) => {
            let mut diags = Vec::new();
            for e in errors {
                let (line, column) = parser
                    .site_pos
                    .get(&e.site)
                    .copied()
                    .unwrap_or((1, 1));
                diags.push(Diagnostic::error_at(src, line, column, e.to_string()));
            }
            Err(diags)
        }
    }
}
