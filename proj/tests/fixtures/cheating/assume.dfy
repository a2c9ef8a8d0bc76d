b := a+1;  
while ( b < n )
invariant 0 <= a < b <= n+1
{
  assume a < n;
  if ( X[b] <= p ) {
    var t := X[b];
    X[b] := X[a];
    X[a] := t;
    a := a + 1;
  }
  b := b + 1;
}
