#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "common.hpp"

namespace digitdist
{
    using Rational = boost::multiprecision::cpp_rational;

    inline BigInt num(const Rational& x) { return boost::multiprecision::numerator(x); }
    inline BigInt den(const Rational& x) { return boost::multiprecision::denominator(x); }

    // Floor division for signed big integers (den > 0).
    inline BigInt floor_div(const BigInt& a, const BigInt& d)
    {
        BigInt qt = a / d;
        if ((a % d != 0) && ((a < 0) != (d < 0)))
            --qt;
        return qt;
    }

    inline BigInt floor(const Rational& x) { return floor_div(num(x), den(x)); }

    // {x} in [0,1).
    inline Rational frac(const Rational& x) { return x - Rational(floor(x)); }

    // <x>: nearest integer, halves rounded up.
    inline BigInt nearest(const Rational& x) { return floor(x + Rational(1, 2)); }

    // ||x||: distance to the nearest integer.
    inline Rational dist_to_int(const Rational& x)
    {
        Rational f = frac(x);
        Rational g = 1 - f;
        return f < g ? f : g;
    }

    inline Rational parse_rational(const std::string& s)
    {
        try
        {
            auto slash = s.find('/');
            if (slash == std::string::npos)
            {
                auto dot = s.find('.');
                if (dot == std::string::npos)
                    return Rational(BigInt(s));
                std::string whole = s.substr(0, dot), part = s.substr(dot + 1);
                bool neg = !whole.empty() && whole[0] == '-';
                BigInt scale = 1;
                for (std::size_t i = 0; i < part.size(); ++i)
                    scale *= 10;
                BigInt w = whole.empty() || whole == "-" ? BigInt(0) : BigInt(whole);
                BigInt p = part.empty() ? BigInt(0) : BigInt(part);
                Rational r = Rational(w) + (neg ? -1 : 1) * Rational(p, scale);
                return r;
            }
            BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
            require(d != 0, "rational with zero denominator");
            return Rational(n, d);
        }
        catch (const precondition_error&)
        {
            throw;
        }
        catch (const std::exception&)
        {
            throw precondition_error("cannot parse rational '" + s + "'");
        }
    }

    inline std::string to_string(const Rational& x)
    {
        if (den(x) == 1)
            return num(x).str();
        return num(x).str() + "/" + den(x).str();
    }
}
